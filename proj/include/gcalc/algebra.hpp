#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gcalc/errors.hpp"
#include "gcalc/graph.hpp"
#include "gcalc/pairings.hpp"
#include "gcalc/rational.hpp"

namespace gcalc {

/// Dense tensor of the given arity over indices {0..dim-1}, row-major with
/// the first index most significant.
class Tensor {
  public:
    Tensor() = default;
    Tensor(int dim, int arity) : dim_(dim), arity_(arity), a_(size_of(dim, arity)) {}

    int dim() const { return dim_; }
    int arity() const { return arity_; }
    std::size_t size() const { return a_.size(); }

    Rational& operator[](std::size_t flat) { return a_[flat]; }
    const Rational& operator[](std::size_t flat) const { return a_[flat]; }

    Rational& at(std::span<const int> idx) { return a_[flatten(idx)]; }
    const Rational& at(std::span<const int> idx) const { return a_[flatten(idx)]; }
    Rational& at(std::initializer_list<int> idx) { return at(std::span<const int>(idx.begin(), idx.size())); }
    const Rational& at(std::initializer_list<int> idx) const {
        return at(std::span<const int>(idx.begin(), idx.size()));
    }

    std::size_t flatten(std::span<const int> idx) const {
        if (static_cast<int>(idx.size()) != arity_) throw domain_error("tensor index arity mismatch");
        std::size_t flat = 0;
        for (int i : idx) {
            if (i < 0 || i >= dim_) throw domain_error("tensor index out of range");
            flat = flat * dim_ + static_cast<std::size_t>(i);
        }
        return flat;
    }

    /// Iterates all index tuples in lexicographic (= flat) order; fn(idx, flat).
    template <typename Fn>
    void for_each_index(Fn&& fn) const {
        std::vector<int> idx(arity_, 0);
        for (std::size_t flat = 0; flat < a_.size(); ++flat) {
            fn(static_cast<const std::vector<int>&>(idx), flat);
            int k = arity_ - 1;
            while (k >= 0 && ++idx[k] == dim_) idx[k--] = 0;
        }
    }

    friend bool operator==(const Tensor& x, const Tensor& y) {
        return x.dim_ == y.dim_ && x.arity_ == y.arity_ && x.a_ == y.a_;
    }

  private:
    static std::size_t size_of(int dim, int arity) {
        if (dim <= 0 || arity < 0) throw domain_error("tensor dimensions must be positive");
        std::size_t s = 1;
        for (int k = 0; k < arity; ++k) {
            if (s > (std::size_t{1} << 40) / static_cast<std::size_t>(dim))
                throw domain_error("tensor too large");
            s *= static_cast<std::size_t>(dim);
        }
        return s;
    }

    int dim_ = 1;
    int arity_ = 0;
    std::vector<Rational> a_{Rational(0)};
};

/// Non-degenerate symmetric inner product. Symmetry is validated at
/// construction; non-degeneracy is checked when the inverse is first needed.
class Metric {
  public:
    Metric() : Metric(1, {Rational(1)}) {}
    Metric(int dim, std::vector<Rational> entries) : dim_(dim), g_(std::move(entries)) {
        if (dim_ <= 0) throw domain_error("metric dimension must be positive");
        if (g_.size() != static_cast<std::size_t>(dim_) * dim_) throw domain_error("metric entry count mismatch");
        for (int i = 0; i < dim_; ++i)
            for (int j = i + 1; j < dim_; ++j)
                if (at(i, j) != at(j, i)) throw domain_error("metric is not symmetric");
    }

    static Metric identity(int dim) {
        std::vector<Rational> e(static_cast<std::size_t>(dim) * dim, Rational(0));
        for (int i = 0; i < dim; ++i) e[static_cast<std::size_t>(i) * dim + i] = 1;
        return Metric(dim, std::move(e));
    }

    static Metric diagonal(const std::vector<Rational>& d) {
        int n = static_cast<int>(d.size());
        std::vector<Rational> e(static_cast<std::size_t>(n) * n, Rational(0));
        for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = d[i];
        return Metric(n, std::move(e));
    }

    int dim() const { return dim_; }
    const Rational& at(int i, int j) const { return g_[static_cast<std::size_t>(i) * dim_ + j]; }

    /// g^{ij}: exact inverse via Gauss-Jordan; throws on a singular metric.
    const std::vector<Rational>& inverse() const {
        if (!inv_) inv_ = compute_inverse();
        return *inv_;
    }

    const Rational& inv_at(int i, int j) const { return inverse()[static_cast<std::size_t>(i) * dim_ + j]; }

    /// The metric as an arity-2 tensor.
    Tensor as_tensor() const {
        Tensor t(dim_, 2);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) t.at({i, j}) = at(i, j);
        return t;
    }

  private:
    std::vector<Rational> compute_inverse() const {
        int n = dim_;
        std::vector<Rational> a = g_;
        std::vector<Rational> inv(static_cast<std::size_t>(n) * n, Rational(0));
        for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i) * n + i] = 1;
        auto A = [&](std::vector<Rational>& m, int i, int j) -> Rational& {
            return m[static_cast<std::size_t>(i) * n + j];
        };
        for (int col = 0; col < n; ++col) {
            int pivot = -1;
            for (int row = col; row < n; ++row)
                if (A(a, row, col) != 0) {
                    pivot = row;
                    break;
                }
            if (pivot < 0) throw domain_error("metric is degenerate");
            if (pivot != col)
                for (int j = 0; j < n; ++j) {
                    std::swap(A(a, pivot, j), A(a, col, j));
                    std::swap(A(inv, pivot, j), A(inv, col, j));
                }
            Rational p = A(a, col, col);
            for (int j = 0; j < n; ++j) {
                A(a, col, j) /= p;
                A(inv, col, j) /= p;
            }
            for (int row = 0; row < n; ++row) {
                if (row == col || A(a, row, col) == 0) continue;
                Rational f = A(a, row, col);
                for (int j = 0; j < n; ++j) {
                    A(a, row, j) -= f * A(a, col, j);
                    A(inv, row, j) -= f * A(inv, col, j);
                }
            }
        }
        return inv;
    }

    int dim_;
    std::vector<Rational> g_;
    mutable std::optional<std::vector<Rational>> inv_;
};

/// g^{ij} as an n x n array (flattened row-major).
inline std::vector<Rational> metric_inverse(const Metric& m) { return m.inverse(); }

/// The Casimir element sum g^{ij} e_i (x) e_j as an arity-2 tensor.
inline Tensor casimir(const Metric& m) {
    Tensor t(m.dim(), 2);
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) t.at({i, j}) = m.inv_at(i, j);
    return t;
}

enum class AlgebraKind { cyclic, symmetric };

inline const char* to_string(AlgebraKind k) { return k == AlgebraKind::cyclic ? "cyclic" : "symmetric"; }

/// Graph mode matching an algebra kind: cyclic tensors evaluate ribbon
/// graphs, symmetric tensors evaluate ordinary graphs.
inline Mode mode_of(AlgebraKind k) { return k == AlgebraKind::cyclic ? Mode::ribbon : Mode::ordinary; }
inline AlgebraKind kind_of(Mode m) { return m == Mode::ribbon ? AlgebraKind::cyclic : AlgebraKind::symmetric; }

struct InvarianceReport {
    bool ok = true;
    std::vector<int> witness;       // violating index tuple (if any)
    std::vector<int> witness_image;  // its rotated/transposed partner
};

/// Cyclic: equality under the generating rotation (hence all rotations).
/// Symmetric: equality under adjacent transpositions (hence all
/// permutations). Returns a violating index tuple on failure.
inline InvarianceReport check_invariance(const Tensor& t, AlgebraKind kind) {
    InvarianceReport rep;
    int r = t.arity();
    if (r <= 1) return rep;
    std::vector<int> other(r);
    t.for_each_index([&](const std::vector<int>& idx, std::size_t flat) {
        if (!rep.ok) return;
        if (kind == AlgebraKind::cyclic) {
            other[0] = idx[r - 1];
            for (int k = 1; k < r; ++k) other[k] = idx[k - 1];
            if (t[flat] != t.at(other)) {
                rep.ok = false;
                rep.witness = idx;
                rep.witness_image = other;
            }
        } else {
            for (int s = 0; s + 1 < r; ++s) {
                other = idx;
                std::swap(other[s], other[s + 1]);
                if (t[flat] != t.at(other)) {
                    rep.ok = false;
                    rep.witness = idx;
                    rep.witness_image = other;
                    return;
                }
            }
        }
    });
    return rep;
}

/// Contracts the given slot with g^{ij} (index raising).
inline Tensor raise_slot(const Tensor& t, const Metric& m, int slot) {
    if (slot < 0 || slot >= t.arity()) throw domain_error("raise_slot: slot out of range");
    Tensor out(t.dim(), t.arity());
    std::vector<int> src;
    out.for_each_index([&](const std::vector<int>& idx, std::size_t flat) {
        Rational sum = 0;
        src = idx;
        for (int k = 0; k < t.dim(); ++k) {
            src[slot] = k;
            sum += t.at(src) * m.inv_at(k, idx[slot]);
        }
        out[flat] = sum;
    });
    return out;
}

/// Contracts the given slot with g_{ij} (index lowering).
inline Tensor lower_slot(const Tensor& t, const Metric& m, int slot) {
    if (slot < 0 || slot >= t.arity()) throw domain_error("lower_slot: slot out of range");
    Tensor out(t.dim(), t.arity());
    std::vector<int> src;
    out.for_each_index([&](const std::vector<int>& idx, std::size_t flat) {
        Rational sum = 0;
        src = idx;
        for (int k = 0; k < t.dim(); ++k) {
            src[slot] = k;
            sum += t.at(src) * m.at(k, idx[slot]);
        }
        out[flat] = sum;
    });
    return out;
}

/// The mixed-variance map T_{p,r-p} of an arity-r tensor: the last r-p slots
/// are raised with g^{ij}. For cyclic tensors the result is independent of
/// the order in which single slots are rotated.
inline Tensor rotate_tensor(const Tensor& t, const Metric& m, int p) {
    if (p < 0 || p > t.arity()) throw domain_error("rotate_tensor: p out of range");
    Tensor out = t;
    for (int slot = p; slot < t.arity(); ++slot) out = raise_slot(out, m, slot);
    return out;
}

/// Gaussian moment <v^{i_1} ... v^{i_m}>: zero for odd m, otherwise the sum
/// over all pairings of products of g^{i i'}.
inline Rational gaussian_moment(const std::vector<int>& indices, const Metric& m) {
    if (indices.size() % 2 != 0) return 0;
    for (int i : indices)
        if (i < 0 || i >= m.dim()) throw domain_error("gaussian_moment: index out of range");
    Rational total = 0;
    for_each_pairing(static_cast<int>(indices.size()), [&](const PairingView& match) {
        Rational prod = 1;
        for (int a = 0; a < static_cast<int>(match.size()); ++a)
            if (a < match[a]) prod *= m.inv_at(indices[a], indices[match[a]]);
        total += prod;
        return true;
    });
    return total;
}

/// Group-averages of a tensor; handy for building valid algebra inputs.
inline Tensor cyclize(const Tensor& t) {
    int r = t.arity();
    Tensor out(t.dim(), r);
    std::vector<int> rot(r);
    out.for_each_index([&](const std::vector<int>& idx, std::size_t flat) {
        Rational sum = 0;
        rot = idx;
        for (int s = 0; s < r; ++s) {
            sum += t.at(rot);
            std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        }
        out[flat] = r > 0 ? sum / r : t[flat];
    });
    return out;
}

inline Tensor symmetrize(const Tensor& t) {
    int r = t.arity();
    Tensor out(t.dim(), r);
    std::vector<int> perm(r);
    out.for_each_index([&](const std::vector<int>& idx, std::size_t flat) {
        perm = idx;
        std::sort(perm.begin(), perm.end());
        Rational sum = 0;
        std::uint64_t count = 0;
        do {
            sum += t.at(perm);
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        out[flat] = sum / count;
    });
    return out;
}

/// A vector space with metric plus a family of cyclic or symmetric tensors,
/// keyed by valence and decoration. Special vertices reuse the plain tensor
/// of their valence.
class SymAlgebra {
  public:
    SymAlgebra(Metric metric, AlgebraKind kind) : metric_(std::move(metric)), kind_(kind) {}

    int dim() const { return metric_.dim(); }
    AlgebraKind kind() const { return kind_; }
    const Metric& metric() const { return metric_; }

    void add_tensor(int valence, Tensor t, Decoration d = {}) {
        if (t.dim() != dim()) throw domain_error("tensor dimension does not match the metric");
        if (t.arity() != valence) throw domain_error("tensor arity does not match the valence");
        if (d.kind == Decoration::Kind::special)
            throw domain_error("special vertices use the plain tensor of their valence");
        auto rep = check_invariance(t, kind_);
        if (!rep.ok) {
            std::string idx;
            for (int i : rep.witness) idx += std::to_string(i) + " ";
            throw domain_error(std::string("tensor is not ") + to_string(kind_) +
                               "-invariant at indices " + idx);
        }
        tensors_[key(valence, d)] = std::move(t);
    }

    /// Tensor for a (valence, decoration) pair; special falls back to plain.
    const Tensor* find_tensor(int valence, Decoration d = {}) const {
        auto it = tensors_.find(key(valence, d));
        return it == tensors_.end() ? nullptr : &it->second;
    }

    const Tensor& tensor(int valence, Decoration d = {}) const {
        const Tensor* t = find_tensor(valence, d);
        if (!t)
            throw configuration_error("no tensor for valence " + std::to_string(valence) +
                                      " decoration " + gcalc::to_string(d));
        return *t;
    }

    const std::map<std::tuple<int, int, int>, Tensor>& tensors() const { return tensors_; }

  private:
    static std::tuple<int, int, int> key(int valence, Decoration d) {
        if (d.kind == Decoration::Kind::special) d = Decoration{};
        return {valence, static_cast<int>(d.kind), d.value};
    }

    Metric metric_;
    AlgebraKind kind_;
    std::map<std::tuple<int, int, int>, Tensor> tensors_;
};

}  // namespace gcalc
