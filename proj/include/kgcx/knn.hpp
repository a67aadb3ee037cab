#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kgcx {

/// Row-major point cloud. Points are stored class-major: every point of class 0,
/// then class 1, and so on, each class in sample order. Tie-breaking by
/// (class, index-in-class) is therefore tie-breaking by global index.
struct PointSet {
    std::size_t dimension = 0;
    std::vector<double> coords;
    std::vector<std::uint32_t> class_of;

    std::size_t size() const { return class_of.size(); }
    std::span<const double> point(std::size_t i) const { return {coords.data() + i * dimension, dimension}; }
};

/// Squared Euclidean distance.
double squared_distance(std::span<const double> a, std::span<const double> b);

/// k nearest neighbors of every point among all other points, as an n*k
/// row-major index table. Ties in distance go to the smaller index; a point is
/// never its own neighbor. Requires size() >= k + 1.
///
/// knn_serial is the single-threaded reference; knn_parallel splits queries
/// across OpenMP threads and returns the identical table for any thread count.
std::vector<std::uint32_t> knn_serial(const PointSet& points, std::size_t k);
std::vector<std::uint32_t> knn_parallel(const PointSet& points, std::size_t k, int threads = 0);

}  // namespace kgcx
