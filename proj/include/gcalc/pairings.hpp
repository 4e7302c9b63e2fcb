#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gcalc/canonical.hpp"
#include "gcalc/graph.hpp"

namespace gcalc {

/// A perfect matching on {0,...,2n-1}, stored as an involution array.
using PairingView = std::vector<int>;

/// (2n-1)!! — number of pairings of 2n slots; 1 for n = 0.
inline std::uint64_t pairing_count(int slots) {
    if (slots % 2 != 0 || slots < 0) throw domain_error("pairing_count: odd slot count");
    std::uint64_t r = 1;
    for (int k = slots - 1; k > 1; k -= 2) r *= static_cast<std::uint64_t>(k);
    return r;
}

/// Streams all pairings of {0..slots-1} in a fixed order: the lowest unpaired
/// slot is matched with each larger unpaired slot in increasing order.
/// Returning false from the callback stops the enumeration.
inline void for_each_pairing(int slots, const std::function<bool(const PairingView&)>& fn) {
    if (slots < 0 || slots % 2 != 0) throw domain_error("for_each_pairing: odd slot count");
    PairingView match(slots, -1);
    bool stop = false;
    std::function<void()> rec = [&]() {
        if (stop) return;
        int lo = 0;
        while (lo < slots && match[lo] >= 0) ++lo;
        if (lo == slots) {
            if (!fn(match)) stop = true;
            return;
        }
        for (int hi = lo + 1; hi < slots && !stop; ++hi) {
            if (match[hi] >= 0) continue;
            match[lo] = hi;
            match[hi] = lo;
            rec();
            match[lo] = -1;
            match[hi] = -1;
        }
    };
    rec();
    (void)stop;
}

/// One sort of vertices in a profile: `count` vertices of the given valence
/// and decoration.
struct VertexSort {
    int valence = 0;
    Decoration decoration = {};
    int count = 0;
    friend bool operator==(const VertexSort&, const VertexSort&) = default;
};

/// Numbers of i-valent vertices l_1..l_k, optionally decorated per sort.
struct ValenceProfile {
    std::vector<VertexSort> sorts;

    /// Plain profile from counts (index 0 holds l_1).
    static ValenceProfile from_counts(const std::vector<int>& l) {
        ValenceProfile p;
        for (size_t i = 0; i < l.size(); ++i) {
            if (l[i] < 0) throw domain_error("negative vertex count in profile");
            if (l[i] > 0) p.sorts.push_back({static_cast<int>(i) + 1, {}, l[i]});
        }
        return p;
    }

    int total_slots() const {
        int t = 0;
        for (const auto& s : sorts) t += s.valence * s.count;
        return t;
    }

    int total_vertices() const {
        int t = 0;
        for (const auto& s : sorts) t += s.count;
        return t;
    }

    /// |K|: the group permuting same-sort vertices and rotating (ribbon) or
    /// permuting (ordinary) the flags at each vertex.
    std::uint64_t group_order(Mode mode) const {
        std::uint64_t k = 1;
        for (const auto& s : sorts) {
            std::uint64_t per_vertex = 1;
            if (mode == Mode::ribbon)
                per_vertex = static_cast<std::uint64_t>(s.valence);
            else
                for (int i = 2; i <= s.valence; ++i) per_vertex *= static_cast<std::uint64_t>(i);
            for (int j = 0; j < s.count; ++j) k *= per_vertex;
            for (int j = 2; j <= s.count; ++j) k *= static_cast<std::uint64_t>(j);
        }
        return k;
    }

    /// Multiset of (valence, decoration) with multiplicities, for matching a
    /// graph against a profile.
    std::map<std::pair<int, Decoration>, int> sort_multiset() const {
        std::map<std::pair<int, Decoration>, int> m;
        for (const auto& s : sorts) m[{s.valence, s.decoration}] += s.count;
        return m;
    }
};

/// Lays out the profile's vertices on contiguous slot blocks and applies the
/// given pairing as the matching.
inline Graph graph_from_pairing(const ValenceProfile& profile, const PairingView& match) {
    GraphBuilder b;
    for (const auto& s : profile.sorts)
        for (int j = 0; j < s.count; ++j) b.add_vertex(s.valence, s.decoration);
    for (int f = 0; f < static_cast<int>(match.size()); ++f)
        if (f < match[f]) b.connect(f, match[f]);
    return b.build();
}

/// One isomorphism class among the closed graphs with a given profile.
struct ProfileClass {
    Graph representative;
    std::string canon;            // canonical form in the generation mode
    std::uint64_t occurrences = 0;  // number of pairings producing the class
    std::uint64_t aut = 0;          // |Aut| of the representative
};

/// All closed graphs with the prescribed profile, bucketed by isomorphism
/// class. Occurrence counts sum to (total_slots - 1)!!; an odd slot total
/// yields the empty list. Classes are ordered by canonical form.
inline std::vector<ProfileClass> graphs_with_profile(const ValenceProfile& profile, Mode mode) {
    if (profile.total_slots() % 2 != 0) return {};
    std::map<std::string, ProfileClass> buckets;
    for_each_pairing(profile.total_slots(), [&](const PairingView& match) {
        Graph g = graph_from_pairing(profile, match);
        std::string key = canonical_form(g, mode);
        auto it = buckets.find(key);
        if (it == buckets.end()) {
            ProfileClass pc;
            pc.representative = std::move(g);
            pc.canon = key;
            pc.occurrences = 1;
            buckets.emplace(std::move(key), std::move(pc));
        } else {
            ++it->second.occurrences;
        }
        return true;
    });
    std::vector<ProfileClass> out;
    out.reserve(buckets.size());
    for (auto& [key, pc] : buckets) {
        pc.aut = automorphism_count(pc.representative, mode);
        out.push_back(std::move(pc));
    }
    return out;
}

/// The coefficient of an isomorphism class in the Wick expansion of a
/// product of vertex tensors: |K| / |Aut|. Equals the occurrence count from
/// graphs_with_profile.
inline std::uint64_t alpha_coefficient(const Graph& g, const ValenceProfile& profile, Mode mode) {
    std::map<std::pair<int, Decoration>, int> have;
    for (size_t v = 0; v < g.vertices.size(); ++v)
        ++have[{static_cast<int>(g.vertices[v].size()), g.decorations[v]}];
    if (have != profile.sort_multiset())
        throw domain_error("alpha_coefficient: graph does not realize the profile");
    std::uint64_t k = profile.group_order(mode);
    std::uint64_t aut = automorphism_count(g, mode);
    if (aut == 0 || k % aut != 0)
        throw invariant_violation("alpha_coefficient: |Aut| does not divide |K|");
    return k / aut;
}

/// One catalog entry: a profile class plus the topology data consumed by the
/// expansion and matrix-model modules.
struct CatalogEntry {
    ValenceProfile profile;
    Graph representative;
    std::string canon;
    std::uint64_t occurrences = 0;
    std::uint64_t aut = 0;
    int components = 0;
    int edges = 0;
    int holes = -1;  // ribbon mode only
    int genus = -1;  // ribbon mode, connected graphs only
};

/// Enumerates all profiles over the given vertex sorts with total slot count
/// between 0 and max_slots (even totals only; counts bounded by the slots).
inline std::vector<ValenceProfile> profiles_up_to(
    const std::vector<std::pair<int, Decoration>>& sorts, int max_slots) {
    std::vector<ValenceProfile> out;
    ValenceProfile current;
    std::function<void(size_t, int)> rec = [&](size_t i, int used) {
        if (i == sorts.size()) {
            if ((used % 2) == 0) out.push_back(current);
            return;
        }
        auto [valence, decor] = sorts[i];
        for (int c = 0; used + c * valence <= max_slots; ++c) {
            if (c > 0) current.sorts.push_back({valence, decor, c});
            rec(i + 1, used + c * valence);
            if (c > 0) current.sorts.pop_back();
        }
    };
    rec(0, 0);
    return out;
}

/// Exhaustive catalog of closed isomorphism classes with total valence up to
/// max_slots, grouped by profile. Includes the empty graph (empty profile).
inline std::vector<CatalogEntry> graphs_up_to_order(
    int max_slots, Mode mode,
    const std::vector<std::pair<int, Decoration>>& sorts) {
    std::vector<CatalogEntry> out;
    for (const auto& profile : profiles_up_to(sorts, max_slots)) {
        for (auto& pc : graphs_with_profile(profile, mode)) {
            CatalogEntry e;
            e.profile = profile;
            e.canon = pc.canon;
            e.occurrences = pc.occurrences;
            e.aut = pc.aut;
            e.components = b0(pc.representative);
            e.edges = pc.representative.edge_count();
            if (mode == Mode::ribbon) {
                e.holes = hole_count(pc.representative);
                if (e.components == 1 && pc.representative.flag_count > 0)
                    e.genus = genus(pc.representative);
            }
            e.representative = std::move(pc.representative);
            out.push_back(std::move(e));
        }
    }
    return out;
}

/// Plain-vertex catalog over valences 1..max_valence.
inline std::vector<CatalogEntry> graphs_up_to_order(int max_slots, Mode mode, int max_valence) {
    std::vector<std::pair<int, Decoration>> sorts;
    for (int v = 1; v <= max_valence; ++v) sorts.push_back({v, Decoration{}});
    return graphs_up_to_order(max_slots, mode, sorts);
}

}  // namespace gcalc
