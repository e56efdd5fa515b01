#pragma once

// Observer-relative equivalences on memories, events, and trace prefixes.

#include <vector>

#include "nmpl/interp.hpp"
#include "nmpl/labels.hpp"
#include "nmpl/lang.hpp"

namespace nmpl {

struct Prefix {
    Mem input;
    std::vector<Event> events;
};

/// First n events of a run (the loop is unrolled as needed).
Prefix prefix_of(const Run& r, std::size_t n);

/// Kleene three-valued truth.
enum class Tri { False, Unknown, True };

Tri tri_and(Tri a, Tri b);
Tri tri_or(Tri a, Tri b);
Tri tri_not(Tri a);
inline Tri to_tri(bool b) { return b ? Tri::True : Tri::False; }
const char* tri_name(Tri t);

bool mem_equiv(const Ctx& ctx, const DownSet& d, const Mem& a, const Mem& b);
/// Throws ModelError when an assigned variable is not in ctx.
bool is_silent(const Ctx& ctx, const DownSet& d, const Event& e);
std::vector<Event> visible_events(const Ctx& ctx, const DownSet& d, const std::vector<Event>& events);
bool events_equiv(const Ctx& ctx, const DownSet& d, const std::vector<Event>& a, const std::vector<Event>& b);
bool prefix_equiv(const Ctx& ctx, const DownSet& d, const Prefix& a, const Prefix& b);
bool prefix_leq(const Ctx& ctx, const DownSet& d, const Prefix& a, const Prefix& b);
bool prefix_lt(const Ctx& ctx, const DownSet& d, const Prefix& a, const Prefix& b);

/// Whether r has a prefix strictly D-above p. Exact on terminated and
/// divergent runs; Unknown when an unfinished run has not yet decided it.
Tri prog(const Ctx& ctx, const DownSet& d, const Prefix& p, const Run& r);

}  // namespace nmpl
