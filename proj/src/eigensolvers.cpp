#include "kgcx/eigensolvers.hpp"

#include <algorithm>
#include <cmath>

#include "kgcx/random.hpp"

namespace kgcx {

DenseSpectrum dense_symmetric_eigen(const Eigen::MatrixXd& matrix, bool with_vectors) {
    if (matrix.rows() != matrix.cols()) throw std::invalid_argument("matrix must be square");
    DenseSpectrum out;
    if (matrix.rows() == 0) return out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        matrix, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("dense symmetric eigensolver failed", 0, std::nan(""));
    }
    out.values = solver.eigenvalues();
    if (with_vectors) out.vectors = solver.eigenvectors();
    return out;
}

namespace {

/// Removes components along the columns of `a` and the first `cols` columns of `b`. Two passes.
void orthogonalize(Eigen::VectorXd& v, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Eigen::Index cols) {
    for (int pass = 0; pass < 2; ++pass) {
        if (a.cols() > 0) v -= a * (a.transpose() * v);
        if (cols > 0) {
            const auto basis = b.leftCols(cols);
            v -= basis * (basis.transpose() * v);
        }
    }
}

EigenPair one_pair(const SymmetricOperator& op, Eigen::Index n, SpectrumEnd end, const Eigen::MatrixXd& locked,
                   const KrylovOptions& opt, std::uint64_t seed) {
    const Eigen::Index space = static_cast<Eigen::Index>(n - locked.cols());
    if (space <= 0) throw std::invalid_argument("no space left after deflation");
    const Eigen::Index max_basis = std::min<Eigen::Index>(std::max(opt.max_basis, 2), space);
    const Eigen::Index keep = std::clamp<Eigen::Index>(opt.keep, 1, std::max<Eigen::Index>(max_basis - 1, 1));

    Eigen::MatrixXd basis(n, max_basis);
    Eigen::MatrixXd image(n, max_basis);
    Eigen::MatrixXd projected = Eigen::MatrixXd::Zero(max_basis, max_basis);
    Eigen::Index size = 0;

    SplitMix64 rng(seed);
    Eigen::VectorXd candidate(n);
    for (Eigen::Index i = 0; i < n; ++i) candidate[i] = rng.uniform() - 0.5;

    Eigen::VectorXd applied(n);
    EigenPair best;
    double residual = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= opt.max_iterations; ++iter) {
        orthogonalize(candidate, locked, basis, size);
        double norm = candidate.norm();
        if (!(norm > 1e-12)) {
            // Invariant subspace reached, or a degenerate residual: restart with noise.
            for (Eigen::Index i = 0; i < n; ++i) candidate[i] = rng.uniform() - 0.5;
            orthogonalize(candidate, locked, basis, size);
            norm = candidate.norm();
            if (!(norm > 1e-12)) {
                // The basis already spans everything that remains.
                break;
            }
        }
        if (size == max_basis) {
            // Thick restart: compress to the best `keep` Ritz vectors.
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(projected.topLeftCorner(size, size));
            const Eigen::MatrixXd& s = small.eigenvectors();
            const Eigen::MatrixXd pick =
                end == SpectrumEnd::Smallest ? Eigen::MatrixXd(s.leftCols(keep)) : Eigen::MatrixXd(s.rightCols(keep));
            const Eigen::VectorXd theta = end == SpectrumEnd::Smallest ? Eigen::VectorXd(small.eigenvalues().head(keep))
                                                                        : Eigen::VectorXd(small.eigenvalues().tail(keep));
            basis.leftCols(keep) = (basis.leftCols(size) * pick).eval();
            image.leftCols(keep) = (image.leftCols(size) * pick).eval();
            projected.setZero();
            projected.topLeftCorner(keep, keep) = theta.asDiagonal();
            size = keep;
            orthogonalize(candidate, locked, basis, size);
            norm = candidate.norm();
            if (!(norm > 1e-12)) break;
        }
        basis.col(size) = candidate / norm;
        op(basis.col(size), applied);
        image.col(size) = applied;
        const Eigen::VectorXd couplings = basis.leftCols(size + 1).transpose() * applied;
        projected.col(size).head(size + 1) = couplings;
        projected.row(size).head(size + 1) = couplings.transpose();
        ++size;

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(projected.topLeftCorner(size, size));
        const Eigen::Index idx = end == SpectrumEnd::Smallest ? 0 : size - 1;
        const double theta = small.eigenvalues()[idx];
        const Eigen::VectorXd s = small.eigenvectors().col(idx);
        Eigen::VectorXd ritz = basis.leftCols(size) * s;
        Eigen::VectorXd resid = image.leftCols(size) * s - theta * ritz;
        residual = resid.norm();
        best.value = theta;
        best.vector = std::move(ritz);
        best.residual = residual;
        best.iterations = iter;
        if (residual <= opt.tolerance) {
            return best;
        }
        candidate = std::move(resid);
    }
    if (residual <= opt.tolerance || size >= space) {
        // Whole remaining space explored: Ritz pairs are exact up to rounding.
        Eigen::VectorXd check(n);
        op(best.vector, check);
        best.residual = (check - best.value * best.vector).norm();
        return best;
    }
    throw ConvergenceError("Krylov eigensolver did not converge", best.iterations, residual);
}

}  // namespace

std::vector<EigenPair> krylov_extreme(const SymmetricOperator& op, Eigen::Index n, int count, SpectrumEnd end,
                                      const Eigen::MatrixXd& deflate, const KrylovOptions& options) {
    if (n <= 0 || count <= 0) return {};
    Eigen::MatrixXd locked = deflate.size() == 0 ? Eigen::MatrixXd(n, 0) : deflate;
    std::vector<EigenPair> pairs;
    for (int c = 0; c < count; ++c) {
        EigenPair pair = one_pair(op, n, end, locked, options, mix64(options.seed + static_cast<std::uint64_t>(c)));
        locked.conservativeResize(Eigen::NoChange, locked.cols() + 1);
        locked.col(locked.cols() - 1) = pair.vector.normalized();
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

}  // namespace kgcx
