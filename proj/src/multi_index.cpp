#include "hermcalc/multi_index.hpp"

#include <stdexcept>

#include "hermcalc/errors.hpp"

namespace hermcalc {

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;  // exact: product of i consecutive ints divisible by i!
    }
    return r;
}

std::int64_t basis_size(int d, int N) { return binomial(N + d, d); }

namespace {

void emit_degree(int d, int degree, MultiIndex& scratch, int pos, int rem,
                 std::vector<MultiIndex>& out) {
    if (pos == d - 1) {
        scratch[pos] = rem;
        out.push_back(scratch);
        return;
    }
    for (int k = rem; k >= 0; --k) {
        scratch[pos] = k;
        emit_degree(d, degree, scratch, pos + 1, rem - k, out);
    }
}

}  // namespace

std::vector<MultiIndex> enumerate_multi_indices(int d, int N) {
    if (d < 1 || N < 0) throw ConfigError("enumerate_multi_indices: need d >= 1, N >= 0");
    std::vector<MultiIndex> out;
    out.reserve(static_cast<size_t>(basis_size(d, N)));
    MultiIndex scratch(d);
    for (int s = 0; s <= N; ++s) emit_degree(d, s, scratch, 0, s, out);
    return out;
}

BasisIndex::BasisIndex(int d, int N) : d_(d), N_(N), list_(enumerate_multi_indices(d, N)) {
    orders_.resize(list_.size());
    lookup_.reserve(list_.size() * 2);
    for (size_t i = 0; i < list_.size(); ++i) {
        orders_[i] = order_of(list_[i]);
        lookup_.emplace(key(list_[i]), static_cast<int>(i));
    }
    up_.assign(list_.size() * d_, -1);
    down_.assign(list_.size() * d_, -1);
    for (size_t i = 0; i < list_.size(); ++i) {
        MultiIndex n = list_[i];
        for (int a = 0; a < d_; ++a) {
            ++n[a];
            up_[i * d_ + a] = index_of(n);
            n[a] -= 2;
            down_[i * d_ + a] = n[a] < 0 ? -1 : index_of(n);
            ++n[a];
        }
    }
}

std::uint64_t BasisIndex::key(const MultiIndex& n) const {
    // entries are <= N <= a few thousand; pack 10 bits per coordinate (d <= 6)
    std::uint64_t k = 0;
    for (int v : n) k = (k << 10) | static_cast<std::uint64_t>(v & 0x3ff);
    return k;
}

int BasisIndex::index_of(const MultiIndex& n) const {
    if (static_cast<int>(n.size()) != d_) return -1;
    int s = 0;
    for (int v : n) {
        if (v < 0 || v > 1023) return -1;
        s += v;
    }
    if (s > N_) return -1;
    auto it = lookup_.find(key(n));
    return it == lookup_.end() ? -1 : it->second;
}

}  // namespace hermcalc
