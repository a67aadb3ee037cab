#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace kgcx {

/// An iterative solver stopped before reaching its residual tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, int iterations, double residual)
        : std::runtime_error(what + " (iterations=" + std::to_string(iterations) +
                             ", residual=" + std::to_string(residual) + ")"),
          iterations_(iterations),
          residual_(residual) {}
    int iterations() const { return iterations_; }
    double residual() const { return residual_; }

private:
    int iterations_;
    double residual_;
};

/// y = A x for a symmetric A.
using SymmetricOperator = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& y)>;

enum class SpectrumEnd { Smallest, Largest };

struct EigenPair {
    double value = 0.0;
    Eigen::VectorXd vector;
    double residual = 0.0;  ///< ||A v - value v|| with ||v|| = 1
    int iterations = 0;     ///< operator applications
};

struct KrylovOptions {
    int max_basis = 60;          ///< basis size before a thick restart
    int keep = 12;               ///< Ritz vectors retained across a restart
    int max_iterations = 20000;  ///< operator applications per eigenpair
    double tolerance = 1e-9;     ///< absolute residual norm
    std::uint64_t seed = 0x5eed;
};

/// Sorted eigenvalues and matching eigenvectors (columns) of a dense symmetric matrix.
struct DenseSpectrum {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

DenseSpectrum dense_symmetric_eigen(const Eigen::MatrixXd& matrix, bool with_vectors = true);

/// `count` eigenpairs from one end of the spectrum of a symmetric operator,
/// restricted to the orthogonal complement of `deflate` (orthonormal columns).
///
/// Each pair is found by a thick-restarted Krylov iteration: the subspace grows
/// by the residual of the current Ritz vector (which spans the Lanczos space),
/// and on overflow it is compressed to its best `keep` Ritz vectors. Converged
/// vectors are locked and deflated from later searches.
std::vector<EigenPair> krylov_extreme(const SymmetricOperator& op, Eigen::Index n, int count, SpectrumEnd end,
                                      const Eigen::MatrixXd& deflate = {}, const KrylovOptions& options = {});

}  // namespace kgcx
