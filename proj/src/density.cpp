#include "qpce/density.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpce::qsim {

namespace {

Eigen::MatrixXcd to_eigen(const DensityMatrix& rho) {
    const auto n = static_cast<Eigen::Index>(rho.dim());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            m(r, c) = rho.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        }
    }
    return m;
}

}  // namespace

DensityMatrix::DensityMatrix(int num_qubits)
    : num_qubits_(num_qubits),
      dim_(std::size_t{1} << num_qubits),
      entries_(dim_ * dim_, cplx{0.0, 0.0}) {
    if (num_qubits < 1) throw std::invalid_argument("num_qubits must be >= 1");
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
    DensityMatrix rho(psi.num_qubits());
    for (std::size_t r = 0; r < rho.dim_; ++r) {
        for (std::size_t c = 0; c < rho.dim_; ++c) {
            rho.at(r, c) = psi.amp(r) * std::conj(psi.amp(c));
        }
    }
    return rho;
}

DensityMatrix DensityMatrix::from_entries(int num_qubits, std::vector<cplx> entries) {
    DensityMatrix rho(num_qubits);
    if (entries.size() != rho.dim_ * rho.dim_) {
        throw std::invalid_argument("entry count must be 4^num_qubits");
    }
    rho.entries_ = std::move(entries);
    return rho;
}

double DensityMatrix::trace_real() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += at(i, i).real();
    return t;
}

bool DensityMatrix::is_hermitian(double tol) const {
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = r; c < dim_; ++c) {
            if (std::abs(at(r, c) - std::conj(at(c, r))) > tol) return false;
        }
    }
    return true;
}

std::vector<double> DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(*this),
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigenvalue decomposition failed");
    }
    const auto& ev = solver.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

bool DensityMatrix::is_positive_semidefinite(double tol) const {
    const auto ev = eigenvalues();
    return std::all_of(ev.begin(), ev.end(), [tol](double v) { return v >= -tol; });
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    if (keep.empty()) throw std::invalid_argument("keep set must be nonempty");
    std::vector<int> kept = keep;
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
        throw std::invalid_argument("duplicate index in keep set");
    }
    const int n = rho.num_qubits();
    for (int q : kept) {
        if (q < 0 || q >= n) throw std::out_of_range("keep index out of range");
    }
    std::vector<int> traced;
    for (int q = 0; q < n; ++q) {
        if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
    }

    const int nk = static_cast<int>(kept.size());
    const int nt = static_cast<int>(traced.size());
    DensityMatrix out(nk);

    // Map (kept bits, traced bits) back to a full-register index. MSB-first:
    // qubit q occupies bit (n-1-q) of the index.
    auto full_index = [&](std::size_t kept_bits, std::size_t traced_bits) {
        std::size_t idx = 0;
        for (int k = 0; k < nk; ++k) {
            const std::size_t b = (kept_bits >> (nk - 1 - k)) & 1u;
            idx |= b << (n - 1 - kept[static_cast<std::size_t>(k)]);
        }
        for (int t = 0; t < nt; ++t) {
            const std::size_t b = (traced_bits >> (nt - 1 - t)) & 1u;
            idx |= b << (n - 1 - traced[static_cast<std::size_t>(t)]);
        }
        return idx;
    };

    const std::size_t traced_patterns = std::size_t{1} << nt;
    for (std::size_t r = 0; r < out.dim(); ++r) {
        for (std::size_t c = 0; c < out.dim(); ++c) {
            cplx acc{0.0, 0.0};
            for (std::size_t t = 0; t < traced_patterns; ++t) {
                acc += rho.at(full_index(r, t), full_index(c, t));
            }
            out.at(r, c) = acc;
        }
    }
    return out;
}

double trace_norm_diff(const DensityMatrix& rho0, const DensityMatrix& rho1) {
    if (rho0.dim() != rho1.dim()) throw std::invalid_argument("dimension mismatch");
    DensityMatrix diff(rho0.num_qubits());
    for (std::size_t r = 0; r < diff.dim(); ++r) {
        for (std::size_t c = 0; c < diff.dim(); ++c) {
            diff.at(r, c) = rho0.at(r, c) - rho1.at(r, c);
        }
    }
    // The difference of two density matrices is Hermitian, so the trace norm
    // is the sum of absolute eigenvalues; no SVD needed.
    double sum = 0.0;
    for (double ev : diff.eigenvalues()) sum += std::abs(ev);
    return sum;
}

double helstrom(const DensityMatrix& rho0, const DensityMatrix& rho1) {
    return 0.5 + 0.25 * trace_norm_diff(rho0, rho1);
}

}  // namespace qpce::qsim
