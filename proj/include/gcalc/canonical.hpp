#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "gcalc/graph.hpp"

namespace gcalc {

namespace detail {

using Code = std::vector<std::int32_t>;

inline std::string code_to_bytes(const Code& c) {
    std::string s;
    s.reserve(c.size() * 4);
    for (std::int32_t v : c) {
        std::uint32_t u = static_cast<std::uint32_t>(v);
        s.push_back(static_cast<char>(u & 0xff));
        s.push_back(static_cast<char>((u >> 8) & 0xff));
        s.push_back(static_cast<char>((u >> 16) & 0xff));
        s.push_back(static_cast<char>((u >> 24) & 0xff));
    }
    return s;
}

inline void append_decoration(Code& code, const Decoration& d) {
    code.push_back(static_cast<std::int32_t>(d.kind));
    code.push_back(d.value);
}

/// Per-component view used by both canonical encoders. Leg positions are
/// global (isomorphisms must preserve the leg order of the whole graph).
struct ComponentView {
    const Graph* part = nullptr;
    std::vector<int> global_in_pos;   // indexed by local in-leg order
    std::vector<int> global_out_pos;  // indexed by local out-leg order
    bool is_circle() const { return part->flag_count == 0; }
    bool has_legs() const { return !part->in_legs.empty() || !part->out_legs.empty(); }
};

inline std::vector<ComponentView> component_views(const Graph& g, const Components& comps) {
    std::vector<int> in_pos(g.flag_count, -1), out_pos(g.flag_count, -1);
    for (size_t i = 0; i < g.in_legs.size(); ++i) in_pos[g.in_legs[i]] = static_cast<int>(i);
    for (size_t i = 0; i < g.out_legs.size(); ++i) out_pos[g.out_legs[i]] = static_cast<int>(i);
    std::vector<ComponentView> views;
    for (size_t c = 0; c < comps.parts.size(); ++c) {
        ComponentView v;
        v.part = &comps.parts[c];
        for (int local : v.part->in_legs) v.global_in_pos.push_back(in_pos[comps.original_flags[c][local]]);
        for (int local : v.part->out_legs) v.global_out_pos.push_back(out_pos[comps.original_flags[c][local]]);
        views.push_back(std::move(v));
    }
    return views;
}

// ---------------------------------------------------------------------------
// Ribbon encoding: breadth-first relabeling of flags from a seed set, reading
// the rotation and matching permutations. Two components have equal codes iff
// some flag bijection commutes with both permutations and preserves leg
// positions and decorations.
// ---------------------------------------------------------------------------

inline Code ribbon_code_from_seeds(const ComponentView& cv, const std::vector<int>& seeds) {
    const Graph& g = *cv.part;
    std::vector<int> label(g.flag_count, -1);
    std::vector<int> order;
    order.reserve(g.flag_count);
    auto visit = [&](int f) {
        if (label[f] < 0) {
            label[f] = static_cast<int>(order.size());
            order.push_back(f);
        }
    };
    for (int s : seeds) visit(s);
    for (size_t i = 0; i < order.size(); ++i) {
        int f = order[i];
        visit(g.rotation_next(f));
        visit(g.matching[f]);
    }

    std::vector<int> leg_tag(g.flag_count, -1), leg_pos(g.flag_count, -1);
    for (size_t i = 0; i < g.in_legs.size(); ++i) {
        leg_tag[g.in_legs[i]] = 0;
        leg_pos[g.in_legs[i]] = cv.global_in_pos[i];
    }
    for (size_t i = 0; i < g.out_legs.size(); ++i) {
        leg_tag[g.out_legs[i]] = 1;
        leg_pos[g.out_legs[i]] = cv.global_out_pos[i];
    }

    Code code;
    code.reserve(order.size() * 5 + 2);
    for (int f : order) {
        code.push_back(label[g.rotation_next(f)]);
        code.push_back(label[g.matching[f]]);
        if (leg_tag[f] >= 0) {
            code.push_back(leg_tag[f]);
            code.push_back(leg_pos[f]);
            code.push_back(0);
        } else {
            int v = g.owner_of(f);
            code.push_back(2);
            append_decoration(code, g.decorations[v]);
        }
    }
    return code;
}

struct ComponentResult {
    Code code;
    std::uint64_t aut = 1;  // flag-level automorphisms of the component
};

inline ComponentResult ribbon_component(const ComponentView& cv) {
    const Graph& g = *cv.part;
    ComponentResult res;
    if (cv.has_legs()) {
        // Legs pin the labeling: seed with this component's legs ordered by
        // (in before out, global position).
        std::vector<std::pair<std::pair<int, int>, int>> seeds;
        for (size_t i = 0; i < g.in_legs.size(); ++i)
            seeds.push_back({{0, cv.global_in_pos[i]}, g.in_legs[i]});
        for (size_t i = 0; i < g.out_legs.size(); ++i)
            seeds.push_back({{1, cv.global_out_pos[i]}, g.out_legs[i]});
        std::sort(seeds.begin(), seeds.end());
        std::vector<int> flat;
        for (auto& s : seeds) flat.push_back(s.second);
        res.code = ribbon_code_from_seeds(cv, flat);
        return res;
    }
    // Closed connected component: automorphisms act freely on flags, so the
    // minimal one-flag-rooted code also yields |Aut| as the number of roots
    // attaining it. Prepending the root's vertex class keeps the search sound
    // when restricted to the minimal class.
    auto root_key = [&](int f) {
        int v = g.owner_of(f);
        return std::tuple<int, int, int>(static_cast<int>(g.vertices[v].size()),
                                         static_cast<int>(g.decorations[v].kind),
                                         g.decorations[v].value);
    };
    auto min_key = root_key(0);
    for (int f = 1; f < g.flag_count; ++f) min_key = std::min(min_key, root_key(f));

    bool first = true;
    std::uint64_t hits = 0;
    for (int f = 0; f < g.flag_count; ++f) {
        if (root_key(f) != min_key) continue;
        Code c = ribbon_code_from_seeds(cv, {f});
        if (first || c < res.code) {
            res.code = std::move(c);
            hits = 1;
            first = false;
        } else if (c == res.code) {
            ++hits;
        }
    }
    res.aut = hits;
    return res;
}

// ---------------------------------------------------------------------------
// Ordinary encoding: the graph is reduced to a vertex-level multigraph with
// loop counts and pinned leg attachments. Vertex classes are refined by
// iterated neighborhood signatures; the canonical code is the minimum over
// class-respecting vertex orderings, and the number of orderings attaining it
// is the vertex-level automorphism count.
// ---------------------------------------------------------------------------

struct OrdinaryModel {
    int nv = 0;
    std::vector<Code> base_sig;                  // per vertex: decor, valence, loops, legs
    std::vector<std::map<int, int>> mult;        // edges to other vertices
    std::vector<int> loops;                      // loops per vertex
    std::vector<std::vector<std::int32_t>> legs; // per vertex: flattened (tag,pos) pairs
    Code strands;                                // leg-to-leg matchings, flattened
};

inline OrdinaryModel ordinary_model(const ComponentView& cv) {
    const Graph& g = *cv.part;
    OrdinaryModel m;
    m.nv = g.vertex_count();
    m.mult.assign(m.nv, {});
    m.loops.assign(m.nv, 0);
    m.legs.assign(m.nv, {});

    std::vector<int> leg_tag(g.flag_count, -1), leg_pos(g.flag_count, -1);
    for (size_t i = 0; i < g.in_legs.size(); ++i) {
        leg_tag[g.in_legs[i]] = 0;
        leg_pos[g.in_legs[i]] = cv.global_in_pos[i];
    }
    for (size_t i = 0; i < g.out_legs.size(); ++i) {
        leg_tag[g.out_legs[i]] = 1;
        leg_pos[g.out_legs[i]] = cv.global_out_pos[i];
    }

    std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> strand_pairs;
    for (int f = 0; f < g.flag_count; ++f) {
        int p = g.matching[f];
        if (f > p) continue;
        int vf = g.owner_of(f), vp = g.owner_of(p);
        if (vf >= 0 && vp >= 0) {
            if (vf == vp)
                ++m.loops[vf];
            else {
                ++m.mult[vf][vp];
                ++m.mult[vp][vf];
            }
        } else if (vf < 0 && vp < 0) {
            auto a = std::make_pair(leg_tag[f], leg_pos[f]);
            auto b = std::make_pair(leg_tag[p], leg_pos[p]);
            strand_pairs.push_back({std::min(a, b), std::max(a, b)});
        } else {
            int vertex = vf >= 0 ? vf : vp;
            int leg = vf >= 0 ? p : f;
            m.legs[vertex].push_back(leg_tag[leg]);
            m.legs[vertex].push_back(leg_pos[leg]);
        }
    }
    std::sort(strand_pairs.begin(), strand_pairs.end());
    for (auto& s : strand_pairs) {
        m.strands.push_back(s.first.first);
        m.strands.push_back(s.first.second);
        m.strands.push_back(s.second.first);
        m.strands.push_back(s.second.second);
    }
    for (int v = 0; v < m.nv; ++v) {
        // keep leg lists sorted by (tag, pos) for determinism
        std::vector<std::pair<std::int32_t, std::int32_t>> ls;
        for (size_t i = 0; i + 1 < m.legs[v].size(); i += 2) ls.push_back({m.legs[v][i], m.legs[v][i + 1]});
        std::sort(ls.begin(), ls.end());
        m.legs[v].clear();
        for (auto& [t, p] : ls) {
            m.legs[v].push_back(t);
            m.legs[v].push_back(p);
        }
        Code sig;
        append_decoration(sig, g.decorations[v]);
        sig.push_back(static_cast<std::int32_t>(g.vertices[v].size()));
        sig.push_back(m.loops[v]);
        sig.push_back(static_cast<std::int32_t>(m.legs[v].size()));
        sig.insert(sig.end(), m.legs[v].begin(), m.legs[v].end());
        m.base_sig.push_back(std::move(sig));
    }
    return m;
}

/// Iteratively refines vertex classes; returns per-vertex class ids that are
/// canonical (assigned by sorted signature) and stable under refinement.
inline std::vector<int> refine_classes(const OrdinaryModel& m) {
    std::vector<Code> sig = m.base_sig;
    std::vector<int> cls(m.nv, 0);
    int classes = 0;
    while (true) {
        std::vector<Code> sorted = sig;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<int> next(m.nv);
        for (int v = 0; v < m.nv; ++v)
            next[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
        int count = static_cast<int>(sorted.size());
        cls = next;
        if (count == classes) break;
        classes = count;
        for (int v = 0; v < m.nv; ++v) {
            Code s;
            s.push_back(cls[v]);
            std::vector<std::pair<int, int>> nb;
            for (auto& [w, k] : m.mult[v]) nb.push_back({cls[w], k});
            std::sort(nb.begin(), nb.end());
            for (auto& [c, k] : nb) {
                s.push_back(c);
                s.push_back(k);
            }
            sig[v] = std::move(s);
        }
    }
    return cls;
}

inline Code ordinary_encode(const OrdinaryModel& m, const std::vector<int>& cls,
                            const std::vector<int>& order_of_vertex) {
    Code code;
    code.push_back(m.nv);
    std::vector<int> vertex_at(m.nv);
    for (int v = 0; v < m.nv; ++v) vertex_at[order_of_vertex[v]] = v;
    for (int pos = 0; pos < m.nv; ++pos) {
        int v = vertex_at[pos];
        code.push_back(cls[v]);
        code.insert(code.end(), m.base_sig[v].begin(), m.base_sig[v].end());
        std::vector<std::pair<int, int>> nb;
        for (auto& [w, k] : m.mult[v]) nb.push_back({order_of_vertex[w], k});
        std::sort(nb.begin(), nb.end());
        code.push_back(static_cast<std::int32_t>(nb.size()));
        for (auto& [p, k] : nb) {
            code.push_back(p);
            code.push_back(k);
        }
    }
    code.insert(code.end(), m.strands.begin(), m.strands.end());
    return code;
}

inline ComponentResult ordinary_component(const ComponentView& cv) {
    const Graph& g = *cv.part;
    OrdinaryModel m = ordinary_model(cv);
    ComponentResult res;
    if (m.nv == 0) {
        // component made of bare strands only
        res.code = m.strands;
        res.code.insert(res.code.begin(), 0);
        return res;
    }
    std::vector<int> cls = refine_classes(m);

    // group vertices by class
    int classes = *std::max_element(cls.begin(), cls.end()) + 1;
    std::vector<std::vector<int>> members(classes);
    for (int v = 0; v < m.nv; ++v) members[cls[v]].push_back(v);

    std::uint64_t total = 1;
    for (auto& mem : members) {
        std::uint64_t f = 1;
        for (std::uint64_t k = 2; k <= mem.size(); ++k) f *= k;
        total *= f;
        if (total > 2'000'000ULL)
            throw invariant_violation("ordinary canonicalization: search space too large");
    }

    std::vector<int> order_of_vertex(m.nv, -1);
    bool first = true;
    std::uint64_t hits = 0;

    // enumerate class-respecting orderings: positions are contiguous per class
    std::vector<int> offset(classes, 0);
    for (int c = 1; c < classes; ++c) offset[c] = offset[c - 1] + static_cast<int>(members[c - 1].size());

    std::vector<std::vector<int>> perms = members;  // working permutations
    auto assign = [&]() {
        for (int c = 0; c < classes; ++c)
            for (size_t i = 0; i < perms[c].size(); ++i)
                order_of_vertex[perms[c][i]] = offset[c] + static_cast<int>(i);
    };

    // odometer over per-class permutations
    for (auto& p : perms) std::sort(p.begin(), p.end());
    while (true) {
        assign();
        Code code = ordinary_encode(m, cls, order_of_vertex);
        if (first || code < res.code) {
            res.code = std::move(code);
            hits = 1;
            first = false;
        } else if (code == res.code) {
            ++hits;
        }
        int c = 0;
        while (c < classes && !std::next_permutation(perms[c].begin(), perms[c].end())) ++c;
        if (c == classes) break;
    }
    res.aut = hits;

    // flag-level automorphisms extend each vertex automorphism independently:
    // parallel edges permute freely, loops permute and flip.
    for (int v = 0; v < m.nv; ++v) {
        for (auto& [w, k] : m.mult[v]) {
            if (w < v) continue;
            for (int i = 2; i <= k; ++i) res.aut *= static_cast<std::uint64_t>(i);
        }
        for (int i = 1; i <= m.loops[v]; ++i) res.aut *= 2ULL * static_cast<std::uint64_t>(i);
    }
    return res;
}

inline ComponentResult component_result(const ComponentView& cv, Mode mode) {
    if (cv.is_circle()) {
        ComponentResult r;
        r.code = {-1};  // sentinel; circles are counted separately anyway
        return r;
    }
    return mode == Mode::ribbon ? ribbon_component(cv) : ordinary_component(cv);
}

}  // namespace detail

/// Canonical byte encoding: two graphs have equal encodings iff they are
/// isomorphic in the given mode (ribbon isomorphisms preserve cyclic orders;
/// both preserve leg orders and decorations). Deterministic.
inline std::string canonical_form(const Graph& g, Mode mode) {
    auto comps = connected_components(g);
    auto views = detail::component_views(g, comps);
    std::vector<detail::Code> codes;
    for (auto& cv : views) {
        if (cv.is_circle()) continue;
        codes.push_back(detail::component_result(cv, mode).code);
    }
    std::sort(codes.begin(), codes.end());
    detail::Code full;
    full.push_back(mode == Mode::ribbon ? 0 : 1);
    full.push_back(static_cast<std::int32_t>(g.in_legs.size()));
    full.push_back(static_cast<std::int32_t>(g.out_legs.size()));
    full.push_back(g.free_circles);
    full.push_back(static_cast<std::int32_t>(codes.size()));
    for (auto& c : codes) {
        full.push_back(static_cast<std::int32_t>(c.size()));
        full.insert(full.end(), c.begin(), c.end());
    }
    return detail::code_to_bytes(full);
}

/// Order of the automorphism group of a closed graph: flag permutations that
/// preserve the vertex structure (with cyclic order in ribbon mode), the
/// matching, and decorations. Isomorphic components may also be swapped.
inline std::uint64_t automorphism_count(const Graph& g, Mode mode) {
    if (!g.closed()) throw domain_error("automorphism_count: graph has legs");
    auto comps = connected_components(g);
    auto views = detail::component_views(g, comps);
    std::map<detail::Code, std::pair<std::uint64_t, std::uint64_t>> groups;  // code -> (count, aut)
    for (auto& cv : views) {
        if (cv.is_circle()) continue;
        auto r = detail::component_result(cv, mode);
        auto [it, fresh] = groups.try_emplace(r.code, 0, r.aut);
        ++it->second.first;
    }
    std::uint64_t total = 1;
    for (auto& [code, cnt] : groups) {
        for (std::uint64_t i = 2; i <= cnt.first; ++i) total *= i;
        for (std::uint64_t i = 0; i < cnt.first; ++i) total *= cnt.second;
    }
    for (int i = 2; i <= g.free_circles; ++i) total *= static_cast<std::uint64_t>(i);
    return total;
}

/// Ribbon/ordinary isomorphism test via canonical encodings.
inline bool isomorphic(const Graph& a, const Graph& b, Mode mode) {
    return canonical_form(a, mode) == canonical_form(b, mode);
}

}  // namespace gcalc
