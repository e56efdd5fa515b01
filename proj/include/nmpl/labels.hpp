#pragma once

// Finite confidentiality x integrity label lattices with voice/view maps.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace nmpl {

class ModelError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A point in a LabelModel: indices into the confidentiality and integrity
/// element tables. Only meaningful together with the model that issued it.
struct Label {
    std::uint16_t conf = 0;
    std::uint16_t integ = 0;

    auto operator<=>(const Label&) const = default;
};

struct Violation {
    std::string law;
    std::string detail;
};

using ValidationReport = std::vector<Violation>;

/// Input to LabelModel construction. Order lists are (lower, upper) pairs.
struct ModelSpec {
    std::vector<std::string> conf_elems;
    std::vector<std::pair<std::string, std::string>> conf_order;
    std::vector<std::string> integ_elems;
    std::vector<std::pair<std::string, std::string>> integ_order;
    std::map<std::string, std::string> voice;
    std::map<std::string, std::string> view;
};

class DownSet;
class Attacker;

class LabelModel {
  public:
    /// Builds the tables without checking any law. When `close_orders` is
    /// set the reflexive-transitive closure of both order lists is taken.
    /// Throws ModelError on unknown element names or duplicate elements.
    static LabelModel from_spec(const ModelSpec& spec, bool close_orders = true);

    /// Parses the JSON config format and rejects models failing validate().
    static LabelModel from_json(const nlohmann::json& doc);
    static LabelModel load_file(const std::string& path);

    /// Pub/Sec x Trd/Unt with voice(Pub)=Unt, voice(Sec)=Trd,
    /// view(Trd)=Sec, view(Unt)=Pub.
    static LabelModel four_point();

    /// Confidentiality elements are reader sets, integrity elements are writer
    /// sets over `principals`; voice maps readers to writers and view maps
    /// writers to readers.
    static LabelModel principal_powerset(const std::vector<std::string>& principals);

    ValidationReport validate() const;

    std::size_t conf_count() const { return conf_names_.size(); }
    std::size_t integ_count() const { return integ_names_.size(); }
    std::size_t label_count() const { return conf_count() * integ_count(); }

    const std::string& conf_name(std::uint16_t c) const { return conf_names_.at(c); }
    const std::string& integ_name(std::uint16_t i) const { return integ_names_.at(i); }
    std::uint16_t conf_index(std::string_view name) const;
    std::uint16_t integ_index(std::string_view name) const;

    bool conf_leq(std::uint16_t a, std::uint16_t b) const { return conf_leq_[a * conf_count() + b] != 0; }
    bool integ_leq(std::uint16_t a, std::uint16_t b) const { return integ_leq_[a * integ_count() + b] != 0; }
    std::uint16_t voice(std::uint16_t c) const { return voice_.at(c); }
    std::uint16_t view(std::uint16_t i) const { return view_.at(i); }

    bool contains(Label l) const { return l.conf < conf_count() && l.integ < integ_count(); }
    bool flows_to(Label a, Label b) const;
    Label join(Label a, Label b) const;
    Label meet(Label a, Label b) const;
    Label reflect(Label l) const;
    bool is_non_compromised(Label l) const { return flows_to(l, reflect(l)); }
    Label bottom() const;
    Label top() const;

    std::size_t index(Label l) const { return std::size_t{l.conf} * integ_count() + l.integ; }
    Label at(std::size_t index) const;
    std::vector<Label> labels() const;

    Label label(std::string_view conf, std::string_view integ) const;
    /// Parses `(Conf,Integ)`, surrounding whitespace allowed.
    Label parse_label(std::string_view text) const;
    std::string name(Label l) const;

    std::vector<DownSet> enumerate_downsets() const;
    std::vector<Attacker> enumerate_attackers() const;

  private:
    void require(Label l) const;
    void build_bounds();

    std::vector<std::string> conf_names_;
    std::vector<std::string> integ_names_;
    std::vector<char> conf_leq_;
    std::vector<char> integ_leq_;
    std::vector<std::uint16_t> voice_;
    std::vector<std::uint16_t> view_;
    // -1 where no least upper / greatest lower bound exists.
    std::vector<int> conf_join_, conf_meet_, integ_join_, integ_meet_;
    int conf_bot_ = -1, conf_top_ = -1, integ_bot_ = -1, integ_top_ = -1;
};

/// Downward-closed set of labels; membership indexed by LabelModel::index.
class DownSet {
  public:
    DownSet() = default;
    DownSet(std::vector<char> members, std::size_t integ_count)
        : members_(std::move(members)), integ_count_(integ_count) {}

    static DownSet empty(const LabelModel& m) { return {std::vector<char>(m.label_count(), 0), m.integ_count()}; }
    static DownSet full(const LabelModel& m) { return {std::vector<char>(m.label_count(), 1), m.integ_count()}; }
    /// Down-closure of a single label.
    static DownSet below(const LabelModel& m, Label top);

    bool contains(Label l) const { return members_.at(std::size_t{l.conf} * integ_count_ + l.integ) != 0; }
    std::size_t size() const;
    std::vector<Label> labels() const;
    bool is_downward_closed(const LabelModel& m) const;
    bool subset_of(const DownSet& other) const;
    const std::vector<char>& members() const { return members_; }

    bool operator==(const DownSet&) const = default;

  private:
    std::vector<char> members_;
    std::size_t integ_count_ = 0;
};

/// Attacker (P, T) given by its public confidentiality elements and trusted
/// integrity elements.
class Attacker {
  public:
    Attacker(std::vector<char> public_conf, std::vector<char> trusted_integ)
        : public_conf_(std::move(public_conf)), trusted_integ_(std::move(trusted_integ)) {}

    bool is_public(Label l) const { return public_conf_.at(l.conf) != 0; }
    bool is_trusted(Label l) const { return trusted_integ_.at(l.integ) != 0; }
    /// P = publicConf x I
    DownSet public_set(const LabelModel& m) const;
    /// T = C x trustedInteg
    DownSet trusted_set(const LabelModel& m) const;
    const std::vector<char>& public_conf() const { return public_conf_; }
    const std::vector<char>& trusted_integ() const { return trusted_integ_; }

    std::string describe(const LabelModel& m) const;

    bool operator==(const Attacker&) const = default;

  private:
    std::vector<char> public_conf_;
    std::vector<char> trusted_integ_;
};

/// All down-closed subsets of an n-element order given as a row-major leq
/// matrix, in ascending order of their bitmask (highest index most
/// significant). Throws ModelError past `limit` results.
std::vector<std::vector<char>> enumerate_down_closed(std::size_t n, const std::vector<char>& leq,
                                                     std::size_t limit = std::size_t{1} << 20);

}  // namespace nmpl
