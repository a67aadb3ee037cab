#include "kgcx/knn.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include <omp.h>

namespace kgcx {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    // Four independent lanes let the compiler vectorize without reassociating.
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t n = a.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        for (std::size_t l = 0; l < 4; ++l) {
            const double d = a[i + l] - b[i + l];
            acc[l] += d * d;
        }
    }
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        acc[0] += d * d;
    }
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

namespace {

void check(const PointSet& points, std::size_t k) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (points.size() < k + 1) {
        throw std::invalid_argument("k-NN needs at least k+1 points (k=" + std::to_string(k) + ", points=" +
                                    std::to_string(points.size()) + ")");
    }
}

using Candidate = std::pair<double, std::uint32_t>;

/// Neighbors of one query; `scratch` is reused across queries of one worker.
void query(const PointSet& points, std::size_t q, std::size_t k, std::vector<Candidate>& scratch,
           std::uint32_t* out) {
    const std::size_t n = points.size();
    scratch.clear();
    const auto qp = points.point(q);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == q) continue;
        scratch.emplace_back(squared_distance(qp, points.point(j)), static_cast<std::uint32_t>(j));
    }
    std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k), scratch.end());
    for (std::size_t i = 0; i < k; ++i) out[i] = scratch[i].second;
}

}  // namespace

std::vector<std::uint32_t> knn_serial(const PointSet& points, std::size_t k) {
    check(points, k);
    std::vector<std::uint32_t> result(points.size() * k);
    std::vector<Candidate> scratch;
    scratch.reserve(points.size());
    for (std::size_t q = 0; q < points.size(); ++q) {
        query(points, q, k, scratch, result.data() + q * k);
    }
    return result;
}

std::vector<std::uint32_t> knn_parallel(const PointSet& points, std::size_t k, int threads) {
    check(points, k);
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    std::vector<std::uint32_t> result(points.size() * k);
    const int workers = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(workers)
    {
        std::vector<Candidate> scratch;
        scratch.reserve(points.size());
#pragma omp for schedule(dynamic, 16)
        for (std::ptrdiff_t q = 0; q < n; ++q) {
            query(points, static_cast<std::size_t>(q), k, scratch, result.data() + static_cast<std::size_t>(q) * k);
        }
    }
    return result;
}

}  // namespace kgcx
