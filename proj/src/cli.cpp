#include "nmpl/cli.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "nmpl/hyper.hpp"
#include "nmpl/infer.hpp"
#include "nmpl/interp.hpp"
#include "nmpl/typecheck.hpp"

namespace nmpl {

namespace {

// Any failure to read or interpret the inputs; reported with exit 3.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t parse_nat(const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
        throw InputError("not a natural number: '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::out_of_range&) {
        throw InputError("number out of range: '" + s + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

struct Job {
    std::string program_path;
    std::string model_path;
    std::string ctx_path;
    std::string pc;
    std::string domain = "0..2";
    std::size_t fuel = kDefaultFuel;
    std::string property;
    std::optional<std::size_t> attacker;
    std::optional<std::size_t> downset;
    bool all = false;
    bool json = false;
    std::string input;
};

struct Loaded {
    LabelModel model;
    Ctx ctx;
    CmdPtr program;
    Label pc;
};

Loaded load(const Job& job) {
    try {
        LabelModel m = job.model_path.empty() ? LabelModel::four_point() : LabelModel::load_file(job.model_path);
        Ctx ctx = job.ctx_path.empty() ? Ctx{} : load_ctx(job.ctx_path, m);
        CmdPtr c = load_program(job.program_path, m);
        Label pc = job.pc.empty() ? m.bottom() : m.parse_label(job.pc);
        return {std::move(m), std::move(ctx), std::move(c), pc};
    } catch (const ParseError& e) {
        throw InputError(job.program_path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.col()) + ": " +
                         e.what());
    } catch (const ModelError& e) {
        throw InputError(e.what());
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    } catch (const std::runtime_error& e) {
        throw InputError(e.what());
    }
}

int cmd_typecheck(const Job& job, std::ostream& out) {
    Loaded in = load(job);
    const LabelModel& m = in.model;
    auto nt = synth_nt(m, in.ctx, in.pc, *in.program);
    if (!nt) {
        if (job.json) {
            nlohmann::json j{{"ok", false},
                             {"error", kind_name(nt.error().kind)},
                             {"line", nt.error().span.line},
                             {"col", nt.error().span.col},
                             {"message", describe(nt.error(), m)}};
            out << j.dump(2) << '\n';
        } else {
            out << "type error: " << describe(nt.error(), m) << '\n';
        }
        return kExitTypeError;
    }
    bool safe = m.is_non_compromised(nt.value());
    if (job.json) {
        out << nlohmann::json{{"ok", true}, {"nt", m.name(nt.value())}, {"non_compromised", safe}}.dump(2) << '\n';
    } else {
        out << "nt " << m.name(nt.value()) << '\n';
        out << "non-compromised " << (safe ? "yes" : "no") << '\n';
    }
    return safe ? kExitOk : kExitNegative;
}

int cmd_infer(const Job& job, std::ostream& out) {
    Loaded in = load(job);
    const LabelModel& m = in.model;
    auto r = pd_inf(m, in.ctx, in.pc, *erase(in.program));
    if (!r) {
        if (job.json) {
            out << nlohmann::json{{"ok", false},
                                  {"error", kind_name(r.error().kind)},
                                  {"line", r.error().span.line},
                                  {"col", r.error().span.col},
                                  {"message", describe(r.error(), m)}}
                       .dump(2)
                << '\n';
        } else {
            out << "inference failed: " << describe(r.error(), m) << '\n';
        }
        return kExitTypeError;
    }
    std::string text = to_string(*r.value().cmd, m);
    if (job.json) {
        out << nlohmann::json{{"ok", true}, {"program", text}, {"nt", m.name(r.value().nt)}}.dump(2) << '\n';
    } else {
        out << text << '\n';
        out << "nt " << m.name(r.value().nt) << '\n';
    }
    return kExitOk;
}

Mem parse_input(const std::string& text, const Ctx& ctx) {
    Mem mem;
    for (const auto& [x, l] : ctx) mem[x] = 0;
    for (const auto& item : split(text, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("input entries look like x=1: '" + item + "'");
        mem[item.substr(0, eq)] = parse_nat(item.substr(eq + 1));
    }
    return mem;
}

int cmd_run(const Job& job, std::ostream& out) {
    Loaded in = load(job);
    Run r = run(in.program, parse_input(job.input, in.ctx), job.fuel);
    if (job.json) {
        nlohmann::json events = nlohmann::json::array();
        for (const auto& e : r.events) events.push_back(to_string(e, in.model));
        nlohmann::json input = nlohmann::json::object();
        for (const auto& [x, v] : r.input) input[x] = v;
        nlohmann::json j{{"input", input}, {"events", events}, {"status", status_name(r.status)}};
        if (r.cycle_start) j["cycle_start"] = *r.cycle_start;
        if (!r.detail.empty()) j["detail"] = r.detail;
        out << j.dump(2) << '\n';
    } else {
        out << dump_run(r, in.model);
    }
    if (r.status == RunStatus::Stuck) return kExitTypeError;
    if (r.status == RunStatus::Unknown) return kExitInconclusive;
    return kExitOk;
}

std::string mem_text(const Mem& mem) {
    std::string s;
    for (const auto& [x, v] : mem) s += (s.empty() ? "" : " ") + x + "=" + std::to_string(v);
    return s.empty() ? "(empty)" : s;
}

void print_witness(std::ostream& out, const nlohmann::json& w) {
    out << "witness " << w["property"].get<std::string>();
    if (w.contains("frame")) out << " (" << w["frame"].get<std::string>() << ")";
    out << '\n';
    for (const auto& r : w["runs"]) {
        out << "  " << r["role"].get<std::string>() << " run " << r["index"].get<std::size_t>() << " input";
        for (const auto& [x, v] : r["input"].items()) out << ' ' << x << '=' << v.get<std::uint64_t>();
        out << " (" << r["status"].get<std::string>() << ")\n";
    }
    for (const auto& p : w["prefixes"]) {
        out << "  " << p["role"].get<std::string>() << " = " << p["run"].get<std::string>() << "[0.."
            << p["length"].get<std::size_t>() << ") [";
        bool first = true;
        for (const auto& e : p["events"]) {
            out << (first ? "" : ", ") << e.get<std::string>();
            first = false;
        }
        out << "]\n";
    }
}

int exit_for(Outcome o) {
    switch (o) {
        case Outcome::Holds: return kExitOk;
        case Outcome::Violated: return kExitNegative;
        case Outcome::Inconclusive: return kExitInconclusive;
    }
    return kExitInput;
}

int cmd_hypercheck(const Job& job, std::ostream& out) {
    auto prop = parse_property(job.property);
    if (!prop) throw InputError("unknown property '" + job.property + "'");
    Loaded in = load(job);
    const LabelModel& m = in.model;
    std::vector<std::uint64_t> domain;
    try {
        domain = parse_domain(job.domain);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    auto runs = behav(in.program, in.ctx, domain, job.fuel);

    Report report;
    std::optional<std::size_t> selected = is_two_trace(*prop) ? job.downset : job.attacker;
    if ((is_two_trace(*prop) && job.attacker) || (!is_two_trace(*prop) && job.downset))
        throw InputError(std::string("property ") + property_name(*prop) +
                         (is_two_trace(*prop) ? " takes --downset, not --attacker" : " takes --attacker, not --downset"));
    if (selected) {
        report.property = *prop;
        std::string name;
        Verdict v;
        if (is_two_trace(*prop)) {
            auto ds = m.enumerate_downsets();
            if (*selected >= ds.size()) throw InputError("down-set index out of range");
            name = describe(ds[*selected], m);
            v = check_at(*prop, runs, in.ctx, ds[*selected], ds[*selected]);
        } else {
            auto as = m.enumerate_attackers();
            if (*selected >= as.size()) throw InputError("attacker index out of range");
            name = as[*selected].describe(m);
            v = check_at(*prop, runs, in.ctx, m, as[*selected]);
        }
        report.overall = v;
        report.components.push_back({name, v});
        if (v.outcome == Outcome::Violated) report.witness_component = 0;
    } else {
        report = check_all(runs, in.ctx, *prop, m);
    }

    nlohmann::json j = report_to_json(report, runs, m);
    if (job.json) {
        if (!job.all && !selected) j.erase("components");
        out << j.dump(2) << '\n';
        return exit_for(report.overall.outcome);
    }
    out << "property " << property_name(*prop) << '\n';
    out << "runs " << runs.size() << " over domain";
    for (auto v : domain) out << ' ' << v;
    out << '\n';
    if (job.all || selected) {
        for (const auto& c : report.components) {
            out << "component " << c.component << ": " << outcome_name(c.verdict.outcome);
            if (c.verdict.unknown_count) out << " (" << c.verdict.unknown_count << " unknown)";
            out << '\n';
        }
    }
    out << "outcome " << outcome_name(report.overall.outcome);
    if (report.overall.unknown_count) out << " (" << report.overall.unknown_count << " unknown)";
    out << '\n';
    if (report.witness_component) {
        out << "at " << report.components[*report.witness_component].component << '\n';
        print_witness(out, j["witness"]);
        const Witness& w = *report.overall.witness;
        for (std::size_t k = 0; k < w.runs.size(); ++k)
            if (std::find(w.runs.begin(), w.runs.begin() + static_cast<std::ptrdiff_t>(k), w.runs[k]) ==
                w.runs.begin() + static_cast<std::ptrdiff_t>(k))
                out << "trace of run " << w.runs[k] << ": " << mem_text(runs[w.runs[k]].input) << '\n'
                    << dump_run(runs[w.runs[k]], m);
    }
    return exit_for(report.overall.outcome);
}

}  // namespace

std::vector<std::uint64_t> parse_domain(const std::string& text) {
    std::vector<std::uint64_t> out;
    auto dots = text.find("..");
    try {
        if (dots != std::string::npos) {
            std::uint64_t lo = parse_nat(text.substr(0, dots)), hi = parse_nat(text.substr(dots + 2));
            if (lo > hi || hi - lo > 1024) throw std::invalid_argument("bad domain range '" + text + "'");
            for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
        } else {
            for (const auto& item : split(text, ',')) out.push_back(parse_nat(item));
        }
    } catch (const InputError& e) {
        throw std::invalid_argument(e.what());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty()) throw std::invalid_argument("empty value domain");
    return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Progress-sensitive information-flow toolkit", "nmpl"};
    app.require_subcommand(1);
    Job job;

    auto common = [&](CLI::App* sub) {
        sub->add_option("program", job.program_path, "Program file")->required();
        sub->add_option("--model", job.model_path, "Label model JSON (default: four-point)");
        sub->add_option("--ctx", job.ctx_path, "Typing context JSON");
        sub->add_option("--pc", job.pc, "Program-counter label, e.g. (Pub,Trd)");
        sub->add_flag("--json", job.json, "Structured output");
    };
    auto* tc = app.add_subcommand("typecheck", "Synthesize the least nontermination label");
    common(tc);
    auto* inf = app.add_subcommand("infer", "Insert progress downgrades");
    common(inf);
    auto* rn = app.add_subcommand("run", "Dump the classified trace for one input");
    common(rn);
    rn->add_option("--input", job.input, "Input memory, e.g. x=1,y=2 (unlisted variables are 0)");
    rn->add_option("--fuel", job.fuel, "Step budget")->check(CLI::PositiveNumber);
    auto* hc = app.add_subcommand("hypercheck", "Check a hyperproperty over all inputs in the domain");
    common(hc);
    hc->add_option("--property", job.property, "psni|pini|lfp|psrd|pird|rpl|pste|pite|tpc|psnmif|pinmif|nmpl")
        ->required();
    hc->add_option("--domain", job.domain, "Value domain, e.g. 0..2 or 0,1,2");
    hc->add_option("--fuel", job.fuel, "Step budget")->check(CLI::PositiveNumber);
    hc->add_option("--attacker", job.attacker, "Attacker index");
    hc->add_option("--downset", job.downset, "Down-set index");
    hc->add_flag("--all", job.all, "Report every component");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (tc->parsed()) return cmd_typecheck(job, out);
        if (inf->parsed()) return cmd_infer(job, out);
        if (rn->parsed()) return cmd_run(job, out);
        return cmd_hypercheck(job, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ModelError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
}

}  // namespace nmpl
