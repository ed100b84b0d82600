#pragma once

#include "drx/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace drx {

// Curve classes are integer vectors in a fixed lattice basis. The point
// model uses rank 0 (the unique class is the empty vector).
using CurveClass = std::vector<long long>;

inline CurveClass zero_class(unsigned rank) { return CurveClass(rank, 0); }

inline CurveClass class_add(const CurveClass& a, const CurveClass& b) {
    CurveClass out(a);
    for (size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

inline CurveClass class_sub(const CurveClass& a, const CurveClass& b) {
    CurveClass out(a);
    for (size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

inline bool class_is_zero(const CurveClass& a) {
    return std::all_of(a.begin(), a.end(), [](long long x) { return x == 0; });
}

enum class TargetKind { Point, FreeMonoid, RootLatticeAell };

// Numerical stand-in for a pair (X, S): a lattice of curve classes with an
// effectivity notion and the pairing values of c1(S) on generators. No
// actual variety is represented; classes stay formal.
class TargetModel {
  public:
    static TargetModel point() { return TargetModel(TargetKind::Point, 0, {}, {}); }

    static TargetModel free_monoid(unsigned rank, std::vector<long long> c1S) {
        if (c1S.size() != rank) throw std::invalid_argument("c1S length must equal rank");
        return TargetModel(TargetKind::FreeMonoid, rank, std::move(c1S), {});
    }

    // Effective classes are the non-negative multiples of the root alpha.
    static TargetModel a_ell(unsigned ell, std::vector<long long> alpha,
                             std::vector<long long> c1S) {
        if (alpha.size() != ell || c1S.size() != ell)
            throw std::invalid_argument("alpha/c1S length must equal ell");
        return TargetModel(TargetKind::RootLatticeAell, ell, std::move(c1S), std::move(alpha));
    }

    TargetKind kind() const { return kind_; }
    unsigned rank() const { return rank_; }
    const std::vector<long long>& c1S() const { return c1S_; }
    const std::vector<long long>& alpha() const { return alpha_; }

    bool is_effective(const CurveClass& b) const {
        if (b.size() != rank_) return false;
        switch (kind_) {
            case TargetKind::Point:
                return true;
            case TargetKind::FreeMonoid:
                return std::all_of(b.begin(), b.end(), [](long long x) { return x >= 0; });
            case TargetKind::RootLatticeAell: {
                // b = d * alpha for some d >= 0.
                long long d = -1;
                for (size_t i = 0; i < rank_; ++i) {
                    if (alpha_[i] == 0) {
                        if (b[i] != 0) return false;
                        continue;
                    }
                    if (b[i] % alpha_[i] != 0) return false;
                    long long q = b[i] / alpha_[i];
                    if (q < 0) return false;
                    if (d < 0) d = q;
                    else if (d != q) return false;
                }
                return d != 0 || class_is_zero(b);
            }
        }
        return false;
    }

    long long pair_c1S(const CurveClass& b) const {
        if (!is_effective(b)) throw std::invalid_argument("pair_c1S: class not effective");
        long long out = 0;
        for (size_t i = 0; i < rank_; ++i) out += c1S_[i] * b[i];
        return out;
    }

    // All effective classes b' with b' and b - b' effective.
    std::vector<CurveClass> effective_summands(const CurveClass& b) const {
        if (!is_effective(b)) throw std::invalid_argument("effective_summands: not effective");
        std::vector<CurveClass> out;
        switch (kind_) {
            case TargetKind::Point:
                out.push_back(b);
                break;
            case TargetKind::FreeMonoid: {
                CurveClass cur(rank_, 0);
                enumerate_boxes(b, 0, cur, out);
                break;
            }
            case TargetKind::RootLatticeAell: {
                long long d = multiple_of_alpha(b);
                for (long long k = 0; k <= d; ++k) {
                    CurveClass c(rank_);
                    for (size_t i = 0; i < rank_; ++i) c[i] = k * alpha_[i];
                    out.push_back(c);
                }
                break;
            }
        }
        return out;
    }

    // Ordered tuples of effective classes summing to b, lexicographic order.
    std::vector<std::vector<CurveClass>> effective_splittings(const CurveClass& b,
                                                              unsigned parts) const {
        if (!is_effective(b)) throw std::invalid_argument("effective_splittings: not effective");
        std::vector<std::vector<CurveClass>> out;
        std::vector<CurveClass> cur;
        split_rec(b, parts, cur, out);
        return out;
    }

    // max |pair_c1S(b')| over effective summands b' of b; feeds the sampling
    // threshold r > 2(a_+ + b).
    long long summand_bound_b(const CurveClass& b) const {
        long long best = 0;
        for (const auto& s : effective_summands(b))
            best = std::max(best, std::llabs(pair_c1S(s)));
        return best;
    }

    bool operator==(const TargetModel& o) const {
        return kind_ == o.kind_ && rank_ == o.rank_ && c1S_ == o.c1S_ && alpha_ == o.alpha_;
    }

  private:
    TargetModel(TargetKind kind, unsigned rank, std::vector<long long> c1S,
                std::vector<long long> alpha)
        : kind_(kind), rank_(rank), c1S_(std::move(c1S)), alpha_(std::move(alpha)) {}

    long long multiple_of_alpha(const CurveClass& b) const {
        for (size_t i = 0; i < rank_; ++i)
            if (alpha_[i] != 0) return b[i] / alpha_[i];
        return 0;
    }

    void enumerate_boxes(const CurveClass& b, size_t i, CurveClass& cur,
                         std::vector<CurveClass>& out) const {
        if (i == rank_) {
            out.push_back(cur);
            return;
        }
        for (long long v = 0; v <= b[i]; ++v) {
            cur[i] = v;
            enumerate_boxes(b, i + 1, cur, out);
        }
        cur[i] = 0;
    }

    void split_rec(const CurveClass& remaining, unsigned parts, std::vector<CurveClass>& cur,
                   std::vector<std::vector<CurveClass>>& out) const {
        if (parts == 0) {
            if (class_is_zero(remaining)) out.push_back(cur);
            return;
        }
        if (parts == 1) {
            if (is_effective(remaining)) {
                cur.push_back(remaining);
                out.push_back(cur);
                cur.pop_back();
            }
            return;
        }
        for (const auto& first : effective_summands(remaining)) {
            cur.push_back(first);
            split_rec(class_sub(remaining, first), parts - 1, cur, out);
            cur.pop_back();
        }
    }

    TargetKind kind_;
    unsigned rank_;
    std::vector<long long> c1S_;
    std::vector<long long> alpha_;
};

}  // namespace drx
