#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gcalc/errors.hpp"

namespace gcalc {

/// Isomorphism flavor: ribbon graphs keep the cyclic order of flags at each
/// vertex, ordinary graphs forget it.
enum class Mode { ribbon, ordinary };

inline const char* to_string(Mode m) { return m == Mode::ribbon ? "ribbon" : "ordinary"; }

/// Vertex decoration. Plain vertices are the default; special vertices mark
/// the distinguished sort of two-sort expansions; label/genus decorations
/// select members of a tensor family.
struct Decoration {
    enum class Kind { plain, special, label, genus };
    Kind kind = Kind::plain;
    int value = 0;  // label index or genus; 0 for plain/special

    friend bool operator==(const Decoration&, const Decoration&) = default;
    friend auto operator<=>(const Decoration&, const Decoration&) = default;
};

inline std::string to_string(const Decoration& d) {
    switch (d.kind) {
        case Decoration::Kind::plain: return "ordinary";
        case Decoration::Kind::special: return "special";
        case Decoration::Kind::label: return "label:" + std::to_string(d.value);
        case Decoration::Kind::genus: return "genus:" + std::to_string(d.value);
    }
    return "?";
}

struct GraphType {
    int inputs = 0;
    int outputs = 0;
    friend bool operator==(const GraphType&, const GraphType&) = default;
};

/// A graph of type (p,q) as a combinatorial map: half-edges ("flags")
/// 0..flag_count-1 are either attached to a vertex or serve as leg ends.
/// `vertices[v]` lists the flags of vertex v in cyclic order; `matching` is a
/// fixed-point-free involution whose 2-cycles are edges, legs, or bare
/// strands. Leg-end flags appear in exactly one of `in_legs`/`out_legs` and
/// in no vertex. Vertex-free circle components (which can arise from
/// composition) are tracked by `free_circles`.
///
/// Graphs are immutable values once built; all operations below are pure.
class Graph {
  public:
    int flag_count = 0;
    std::vector<std::vector<int>> vertices;
    std::vector<Decoration> decorations;  // one per vertex
    std::vector<int> matching;
    std::vector<int> in_legs;
    std::vector<int> out_legs;
    int free_circles = 0;

    GraphType type() const {
        return {static_cast<int>(in_legs.size()), static_cast<int>(out_legs.size())};
    }

    bool closed() const { return in_legs.empty() && out_legs.empty(); }
    bool empty() const { return flag_count == 0 && free_circles == 0; }

    int vertex_count() const { return static_cast<int>(vertices.size()); }

    /// Internal edges: matching pairs with both flags vertex-attached.
    int edge_count() const {
        int e = 0;
        for (int f = 0; f < flag_count; ++f) {
            int p = matching[f];
            if (f < p && !is_leg(f) && !is_leg(p)) ++e;
        }
        return e;
    }

    bool is_leg(int flag) const { return owner_of(flag) < 0; }

    /// Vertex owning a flag, or -1 for leg ends.
    int owner_of(int flag) const {
        ensure_index();
        return owner_[flag];
    }

    /// Position of a flag inside its vertex's cyclic list.
    int slot_of(int flag) const {
        ensure_index();
        return slot_[flag];
    }

    /// Next flag in the cyclic order at the owning vertex (legs are fixed).
    int rotation_next(int flag) const {
        int v = owner_of(flag);
        if (v < 0) return flag;
        const auto& ring = vertices[v];
        int s = slot_of(flag);
        return ring[(s + 1) % ring.size()];
    }

    /// Validates all structural invariants; throws domain_error on failure.
    void validate() const {
        if (static_cast<int>(matching.size()) != flag_count)
            throw domain_error("matching size does not match flag count");
        if (decorations.size() != vertices.size())
            throw domain_error("decoration list does not match vertex count");
        std::vector<int> seen(flag_count, 0);
        for (const auto& ring : vertices) {
            if (ring.empty()) throw domain_error("empty vertex");
            for (int f : ring) {
                check_flag(f);
                if (seen[f]++) throw domain_error("flag " + std::to_string(f) + " used twice");
            }
        }
        for (int f : in_legs) {
            check_flag(f);
            if (seen[f]++) throw domain_error("leg flag " + std::to_string(f) + " used twice");
        }
        for (int f : out_legs) {
            check_flag(f);
            if (seen[f]++) throw domain_error("leg flag " + std::to_string(f) + " used twice");
        }
        for (int f = 0; f < flag_count; ++f)
            if (!seen[f]) throw domain_error("flag " + std::to_string(f) + " unused");
        for (int f = 0; f < flag_count; ++f) {
            int p = matching[f];
            check_flag(p);
            if (p == f) throw domain_error("matching fixes flag " + std::to_string(f));
            if (matching[p] != f) throw domain_error("matching is not an involution");
        }
        if (free_circles < 0) throw domain_error("negative circle count");
        index_ready_ = false;  // force rebuild after any external mutation
    }

  private:
    void check_flag(int f) const {
        if (f < 0 || f >= flag_count)
            throw domain_error("flag " + std::to_string(f) + " out of range");
    }

    void ensure_index() const {
        if (index_ready_) return;
        owner_.assign(flag_count, -1);
        slot_.assign(flag_count, -1);
        for (int v = 0; v < static_cast<int>(vertices.size()); ++v)
            for (int s = 0; s < static_cast<int>(vertices[v].size()); ++s) {
                owner_[vertices[v][s]] = v;
                slot_[vertices[v][s]] = s;
            }
        index_ready_ = true;
    }

    mutable std::vector<int> owner_, slot_;
    mutable bool index_ready_ = false;
};

/// Builder for the common case: vertices first, then edges/legs.
class GraphBuilder {
  public:
    /// Adds a vertex with `valence` fresh flags; returns them in cyclic order.
    std::vector<int> add_vertex(int valence, Decoration d = {}) {
        std::vector<int> ring(valence);
        for (int i = 0; i < valence; ++i) ring[i] = next_flag_++;
        g_.vertices.push_back(ring);
        g_.decorations.push_back(d);
        return ring;
    }

    int add_leg_flag() { return next_flag_++; }

    void connect(int f1, int f2) { pairs_.emplace_back(f1, f2); }
    void mark_in(int flag) { g_.in_legs.push_back(flag); }
    void mark_out(int flag) { g_.out_legs.push_back(flag); }
    void add_circles(int n) { g_.free_circles += n; }

    Graph build() {
        g_.flag_count = next_flag_;
        g_.matching.assign(next_flag_, -1);
        for (auto [a, b] : pairs_) {
            if (g_.matching[a] != -1 || g_.matching[b] != -1 || a == b)
                throw domain_error("invalid edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
            g_.matching[a] = b;
            g_.matching[b] = a;
        }
        g_.validate();
        return g_;
    }

  private:
    Graph g_;
    std::vector<std::pair<int, int>> pairs_;
    int next_flag_ = 0;
};

namespace make {

/// Identity strand, type (1,1).
inline Graph strand() {
    GraphBuilder b;
    int i = b.add_leg_flag(), o = b.add_leg_flag();
    b.connect(i, o);
    b.mark_in(i);
    b.mark_out(o);
    return b.build();
}

/// Parallel identity strands, type (n,n).
inline Graph strands(int n) {
    GraphBuilder b;
    for (int k = 0; k < n; ++k) {
        int i = b.add_leg_flag(), o = b.add_leg_flag();
        b.connect(i, o);
        b.mark_in(i);
        b.mark_out(o);
    }
    return b.build();
}

/// Evaluation cap, type (2,0).
inline Graph cap() {
    GraphBuilder b;
    int x = b.add_leg_flag(), y = b.add_leg_flag();
    b.connect(x, y);
    b.mark_in(x);
    b.mark_in(y);
    return b.build();
}

/// Coevaluation cup, type (0,2).
inline Graph cup() {
    GraphBuilder b;
    int x = b.add_leg_flag(), y = b.add_leg_flag();
    b.connect(x, y);
    b.mark_out(x);
    b.mark_out(y);
    return b.build();
}

inline Graph empty() { return Graph{}; }

/// Loop on a single bivalent vertex (the "circle" graph).
inline Graph circle() {
    GraphBuilder b;
    auto v = b.add_vertex(2);
    b.connect(v[0], v[1]);
    return b.build();
}

/// Two trivalent vertices joined by three edges. `twisted` reverses the
/// cyclic order at the second vertex, which changes the genus from 0 to 1.
inline Graph theta(bool twisted = false) {
    GraphBuilder b;
    auto u = b.add_vertex(3);
    auto v = b.add_vertex(3);
    if (!twisted) {
        b.connect(u[0], v[0]);
        b.connect(u[1], v[2]);
        b.connect(u[2], v[1]);
    } else {
        b.connect(u[0], v[0]);
        b.connect(u[1], v[1]);
        b.connect(u[2], v[2]);
    }
    return b.build();
}

}  // namespace make

/// Disjoint union; legs of `left` come first in the combined orders.
inline Graph tensor_product(const Graph& left, const Graph& right) {
    Graph r;
    r.flag_count = left.flag_count + right.flag_count;
    r.vertices = left.vertices;
    r.decorations = left.decorations;
    int off = left.flag_count;
    for (const auto& ring : right.vertices) {
        auto shifted = ring;
        for (int& f : shifted) f += off;
        r.vertices.push_back(std::move(shifted));
    }
    r.decorations.insert(r.decorations.end(), right.decorations.begin(), right.decorations.end());
    r.matching = left.matching;
    r.matching.resize(r.flag_count);
    for (int f = 0; f < right.flag_count; ++f) r.matching[off + f] = right.matching[f] + off;
    r.in_legs = left.in_legs;
    for (int f : right.in_legs) r.in_legs.push_back(f + off);
    r.out_legs = left.out_legs;
    for (int f : right.out_legs) r.out_legs.push_back(f + off);
    r.free_circles = left.free_circles + right.free_circles;
    return r;
}

/// Stacks `top` on top of `bottom`: the i-th output leg of `bottom` is welded
/// to the i-th input leg of `top`. Welded pairs dissolve; chains of bare
/// strands fuse, and a strand cycle closed by the welding becomes a free
/// circle component.
inline Graph compose(const Graph& top, const Graph& bottom) {
    if (top.in_legs.size() != bottom.out_legs.size())
        throw domain_error("compose: arity mismatch (" + std::to_string(top.in_legs.size()) +
                           " inputs vs " + std::to_string(bottom.out_legs.size()) + " outputs)");
    const int hb = bottom.flag_count;
    const int total = hb + top.flag_count;
    std::vector<int> match(total);
    for (int f = 0; f < hb; ++f) match[f] = bottom.matching[f];
    for (int f = 0; f < top.flag_count; ++f) match[hb + f] = top.matching[f] + hb;

    std::vector<int> weld(total, -1);
    for (size_t i = 0; i < top.in_legs.size(); ++i) {
        int b = bottom.out_legs[i];
        int t = top.in_legs[i] + hb;
        weld[b] = t;
        weld[t] = b;
    }

    // New matching on surviving flags: follow strands through welded pairs.
    std::vector<int> new_match(total, -1);
    for (int f = 0; f < total; ++f) {
        if (weld[f] >= 0) continue;
        int g = match[f];
        while (weld[g] >= 0) g = match[weld[g]];
        new_match[f] = g;
    }

    // Strand cycles living entirely on welded flags close into circles.
    int circles = bottom.free_circles + top.free_circles;
    std::vector<char> visited(total, 0);
    for (int w = 0; w < total; ++w) {
        if (weld[w] < 0 || visited[w]) continue;
        bool cycle = true;
        int z = w;
        std::vector<int> trail;
        while (true) {
            trail.push_back(z);
            trail.push_back(weld[z]);
            z = match[weld[z]];
            if (z == w) break;
            if (weld[z] < 0 || visited[z]) {
                cycle = false;  // exits the welding zone or joins a chain
                break;          // already classified as non-cyclic
            }
        }
        for (int x : trail) visited[x] = 1;
        if (cycle) ++circles;
    }

    // Relabel surviving flags densely.
    std::vector<int> relabel(total, -1);
    int next = 0;
    for (int f = 0; f < total; ++f)
        if (weld[f] < 0) relabel[f] = next++;

    Graph r;
    r.flag_count = next;
    r.free_circles = circles;
    r.matching.assign(next, -1);
    for (int f = 0; f < total; ++f)
        if (weld[f] < 0) r.matching[relabel[f]] = relabel[new_match[f]];
    auto copy_vertices = [&](const Graph& g, int off) {
        for (size_t v = 0; v < g.vertices.size(); ++v) {
            auto ring = g.vertices[v];
            for (int& f : ring) f = relabel[f + off];
            r.vertices.push_back(std::move(ring));
            r.decorations.push_back(g.decorations[v]);
        }
    };
    copy_vertices(bottom, 0);
    copy_vertices(top, hb);
    for (int f : bottom.in_legs) r.in_legs.push_back(relabel[f]);
    for (int f : top.out_legs) r.out_legs.push_back(relabel[f + hb]);
    r.validate();
    return r;
}

/// Connectivity classes of flags under vertex membership and matching.
/// Free circles are separate components with no flags.
struct Components {
    std::vector<Graph> parts;          // flagged components, then one entry per circle
    std::vector<std::vector<int>> original_flags;  // per flagged part, sorted originals
    int b0 = 0;
};

inline Components connected_components(const Graph& g) {
    std::vector<int> parent(g.flag_count);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<int>* pp = &parent;
    auto find = [pp](int x) {
        while ((*pp)[x] != x) x = (*pp)[x] = (*pp)[(*pp)[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    for (const auto& ring : g.vertices)
        for (size_t i = 1; i < ring.size(); ++i) unite(ring[0], ring[i]);
    for (int f = 0; f < g.flag_count; ++f) unite(f, g.matching[f]);

    std::vector<int> roots;
    for (int f = 0; f < g.flag_count; ++f)
        if (find(f) == f) roots.push_back(f);

    Components out;
    for (int root : roots) {
        std::vector<int> flags;
        for (int f = 0; f < g.flag_count; ++f)
            if (find(f) == root) flags.push_back(f);
        std::vector<int> relabel(g.flag_count, -1);
        for (size_t i = 0; i < flags.size(); ++i) relabel[flags[i]] = static_cast<int>(i);

        Graph part;
        part.flag_count = static_cast<int>(flags.size());
        part.matching.assign(part.flag_count, -1);
        for (int f : flags) part.matching[relabel[f]] = relabel[g.matching[f]];
        for (size_t v = 0; v < g.vertices.size(); ++v) {
            if (find(g.vertices[v][0]) != root) continue;
            auto ring = g.vertices[v];
            for (int& f : ring) f = relabel[f];
            part.vertices.push_back(std::move(ring));
            part.decorations.push_back(g.decorations[v]);
        }
        for (int f : g.in_legs)
            if (find(f) == root) part.in_legs.push_back(relabel[f]);
        for (int f : g.out_legs)
            if (find(f) == root) part.out_legs.push_back(relabel[f]);
        out.parts.push_back(std::move(part));
        out.original_flags.push_back(std::move(flags));
    }
    for (int c = 0; c < g.free_circles; ++c) {
        Graph circle;
        circle.free_circles = 1;
        out.parts.push_back(std::move(circle));
        out.original_flags.emplace_back();
    }
    out.b0 = static_cast<int>(out.parts.size());
    return out;
}

inline int b0(const Graph& g) { return connected_components(g).b0; }

/// Boundary cycles of a closed connected ribbon graph: orbits of the face
/// permutation f -> rotation_next(matching[f]). Each free circle carries two
/// additional holes with empty flag cycles.
inline std::vector<std::vector<int>> holes(const Graph& g) {
    if (!g.closed()) throw domain_error("holes: graph has legs");
    std::vector<std::vector<int>> cycles;
    std::vector<char> seen(g.flag_count, 0);
    for (int f0 = 0; f0 < g.flag_count; ++f0) {
        if (seen[f0]) continue;
        std::vector<int> orbit;
        int f = f0;
        do {
            seen[f] = 1;
            orbit.push_back(f);
            f = g.rotation_next(g.matching[f]);
        } while (f != f0);
        cycles.push_back(std::move(orbit));
    }
    for (int c = 0; c < g.free_circles; ++c) {
        cycles.emplace_back();
        cycles.emplace_back();
    }
    return cycles;
}

inline int hole_count(const Graph& g) { return static_cast<int>(holes(g).size()); }

/// Genus of a closed connected ribbon graph via 2 - 2g = V - E + #holes.
inline int genus(const Graph& g) {
    if (!g.closed()) throw domain_error("genus: graph has legs");
    auto comps = connected_components(g);
    if (comps.b0 != 1) throw domain_error("genus: graph not connected");
    int chi = g.vertex_count() - g.edge_count() + hole_count(g);
    if (chi % 2 != 0 || chi > 2) throw invariant_violation("genus: impossible Euler characteristic");
    return (2 - chi) / 2;
}

/// Genus of a closed decorated graph: sum of vertex genera plus the first
/// Betti number E - V + b0 (components summed).
inline int modular_genus(const Graph& g) {
    if (!g.closed()) throw domain_error("modular_genus: graph has legs");
    int total = 0;
    for (const auto& d : g.decorations) {
        if (d.kind != Decoration::Kind::genus)
            throw domain_error("modular_genus: vertex without genus decoration");
        total += d.value;
    }
    total += g.edge_count() - g.vertex_count() + b0(g);
    return total;
}

/// Forgets the cyclic order at vertices. The incidence structure is kept
/// verbatim; the result is meant to be consumed with Mode::ordinary.
inline Graph forget_cyclic(const Graph& g) { return g; }

}  // namespace gcalc
