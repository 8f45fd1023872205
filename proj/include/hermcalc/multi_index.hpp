#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace hermcalc {

// Multi-index n = (n_1,...,n_d) of non-negative integers; |n| = sum.
using MultiIndex = std::vector<int>;

inline int order_of(const MultiIndex& n) {
    int s = 0;
    for (int v : n) s += v;
    return s;
}

std::int64_t binomial(int n, int k);

// Number of multi-indices with d entries and |n| <= N, i.e. C(N+d, d).
std::int64_t basis_size(int d, int N);

// All multi-indices with |n| <= N in graded lexicographic order: primary key
// |n| ascending, ties broken lexicographically with the earlier coordinate
// dominating and larger entries first.  d=2, N=1 -> (0,0), (1,0), (0,1).
std::vector<MultiIndex> enumerate_multi_indices(int d, int N);

// Enumeration of the truncated basis plus O(1) reverse lookup.  Everything
// that maps coefficients to flat vectors goes through one of these so the
// ordering is fixed in exactly one place.
class BasisIndex {
public:
    BasisIndex(int d, int N);

    int d() const { return d_; }
    int N() const { return N_; }
    int size() const { return static_cast<int>(list_.size()); }
    const MultiIndex& at(int i) const { return list_[i]; }
    const std::vector<MultiIndex>& all() const { return list_; }
    int order(int i) const { return orders_[i]; }

    // flat index of n; -1 if |n| > N or n has the wrong dimension
    int index_of(const MultiIndex& n) const;

    // flat index of n + e_axis / n - e_axis; -1 if outside the truncation
    int shift_up(int i, int axis) const { return up_[static_cast<size_t>(i) * d_ + axis]; }
    int shift_down(int i, int axis) const { return down_[static_cast<size_t>(i) * d_ + axis]; }

private:
    int d_, N_;
    std::vector<MultiIndex> list_;
    std::vector<int> orders_;
    std::vector<int> up_, down_;
    std::unordered_map<std::uint64_t, int> lookup_;
    std::uint64_t key(const MultiIndex& n) const;
};

}  // namespace hermcalc
