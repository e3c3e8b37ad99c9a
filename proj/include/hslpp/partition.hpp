// Integer partitions (weakly decreasing nonnegative sequences) and the
// interlacing order used throughout the Schur-process machinery.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace hslpp {

struct Partition {
    // Parts in weakly decreasing order; trailing zeros trimmed.
    std::vector<long long> parts;

    Partition() = default;
    explicit Partition(std::vector<long long> p) : parts(std::move(p)) { trim(); }

    void trim() {
        while (!parts.empty() && parts.back() == 0) parts.pop_back();
    }

    /// i-th part (1-based); zero beyond the length.
    long long part(std::size_t i) const {
        return (i >= 1 && i <= parts.size()) ? parts[i - 1] : 0;
    }

    std::size_t length() const { return parts.size(); }

    long long weight() const {
        return std::accumulate(parts.begin(), parts.end(), 0LL);
    }

    /// Alternating sum lambda_1 - lambda_2 + lambda_3 - ...
    long long alternating_sum() const {
        long long s = 0;
        for (std::size_t i = 0; i < parts.size(); ++i) s += (i % 2 == 0) ? parts[i] : -parts[i];
        return s;
    }

    bool is_valid() const {
        for (std::size_t i = 0; i + 1 < parts.size(); ++i)
            if (parts[i] < parts[i + 1]) return false;
        return parts.empty() || parts.back() >= 0;
    }

    bool operator==(const Partition& o) const { return parts == o.parts; }
    bool operator<(const Partition& o) const { return parts < o.parts; }
};

/// Interlacing mu ⪯ lambda: lambda_1 >= mu_1 >= lambda_2 >= mu_2 >= ...
inline bool interlaces(const Partition& lambda, const Partition& mu) {
    std::size_t n = std::max(lambda.length(), mu.length() + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        if (lambda.part(i) < mu.part(i)) return false;
        if (i + 1 <= n && mu.part(i) < lambda.part(i + 1)) return false;
    }
    return true;
}

}  // namespace hslpp
