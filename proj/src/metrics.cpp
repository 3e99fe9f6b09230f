#include "alge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "alge/error.hpp"

namespace alge {

namespace {

void check_permutation(std::span<const int> r, const char* what) {
    std::vector<char> seen(r.size(), 0);
    for (int x : r) {
        if (x < 1 || x > static_cast<int>(r.size()) || seen[x - 1])
            throw std::invalid_argument(std::string(what) + " is not a permutation of 1..N");
        seen[x - 1] = 1;
    }
}

// merge sort inversion count
std::uint64_t count_inversions(std::vector<int>& a, std::vector<int>& tmp, std::size_t lo,
                               std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = (lo + hi) / 2;
    std::uint64_t inv = count_inversions(a, tmp, lo, mid) + count_inversions(a, tmp, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (a[i] <= a[j]) {
            tmp[k++] = a[i++];
        } else {
            inv += mid - i;
            tmp[k++] = a[j++];
        }
    }
    while (i < mid) tmp[k++] = a[i++];
    while (j < hi) tmp[k++] = a[j++];
    std::copy(tmp.begin() + lo, tmp.begin() + hi, a.begin() + lo);
    return inv;
}

}  // namespace

double kendall_tau(std::span<const int> true_rank, std::span<const int> predicted_rank) {
    const std::size_t n = true_rank.size();
    if (predicted_rank.size() != n) throw std::invalid_argument("rank sequences differ in length");
    if (n < 2) throw std::invalid_argument("kendall_tau requires N >= 2");
    check_permutation(true_rank, "true rank");
    check_permutation(predicted_rank, "predicted rank");

    // order nodes by true rank, count inversions of the predicted ranks
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) y[true_rank[i] - 1] = predicted_rank[i];
    std::vector<int> tmp(n);
    const std::uint64_t inv = count_inversions(y, tmp, 0, n);
    const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    const std::int64_t concordant = static_cast<std::int64_t>(pairs - inv);
    const std::int64_t discordant = static_cast<std::int64_t>(inv);
    return 2.0 * static_cast<double>(concordant - discordant) /
           (static_cast<double>(n) * (static_cast<double>(n) - 1.0));
}

DisputationTable disputation(std::span<const RankTable> panel, const RankTable& truth,
                             bool exclude_worst) {
    const std::size_t m = panel.size();
    if (exclude_worst && m < 2)
        throw std::invalid_argument("exclude_worst requires at least 2 panel algorithms");
    if (m < 1) throw std::invalid_argument("panel must be nonempty");
    const NodeId n = truth.num_nodes();
    for (const auto& t : panel)
        if (t.num_nodes() != n) throw DataError("panel rank table size mismatch");

    DisputationTable out;
    out.true_rank = truth.rank;
    out.disputation.resize(n);
    out.panel_ranks.assign(n, std::vector<int>(m));
    for (const auto& t : panel) out.methods.push_back(t.method);

    for (NodeId v = 0; v < n; ++v) {
        std::int64_t total = 0, worst = -1;
        for (std::size_t j = 0; j < m; ++j) {
            const int r = panel[j].rank[v];
            out.panel_ranks[v][j] = r;
            const std::int64_t err = std::abs(static_cast<std::int64_t>(r) - truth.rank[v]);
            total += err;
            if (err > worst) worst = err;  // strict: ties keep the earliest algorithm
        }
        if (exclude_worst)
            out.disputation[v] = static_cast<double>(total - worst) / static_cast<double>(m - 1);
        else
            out.disputation[v] = static_cast<double>(total) / static_cast<double>(m);
    }
    return out;
}

double mse(const InfluenceTable& predicted, const InfluenceTable& truth) {
    if (predicted.num_nodes() != truth.num_nodes())
        throw DataError("influence tables differ in node count");
    double acc = 0.0;
    NodeId count = 0;
    for (NodeId v = 0; v < truth.num_nodes(); ++v) {
        if (predicted.has(v) != truth.has(v))
            throw DataError("influence tables cover different node sets");
        if (!truth.has(v)) continue;
        const double d = predicted.value(v) - truth.value(v);
        acc += d * d;
        ++count;
    }
    if (count == 0) throw DataError("influence tables are empty");
    return acc / count;
}

double mse_on(const InfluenceTable& predicted, const InfluenceTable& truth,
              std::span<const NodeId> nodes) {
    if (nodes.empty()) throw std::invalid_argument("mse_on: empty node set");
    double acc = 0.0;
    for (NodeId v : nodes) {
        const double d = predicted.value(v) - truth.value(v);
        acc += d * d;
    }
    return acc / static_cast<double>(nodes.size());
}

std::vector<double> infected_ratio_curve(const MultiSeedOutcome& outcome, NodeId n) {
    if (n < 1) throw std::invalid_argument("infected_ratio_curve requires n >= 1");
    std::vector<double> curve(outcome.newly_infected_per_step.size());
    double acc = 0.0;
    for (std::size_t t = 0; t < curve.size(); ++t) {
        acc += outcome.newly_infected_per_step[t];
        curve[t] = acc / n;
    }
    return curve;
}

}  // namespace alge
