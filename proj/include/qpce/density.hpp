// Density matrices, partial trace and the two-state discrimination bound.

#pragma once

#include <vector>

#include "qpce/statevector.hpp"

namespace qpce::qsim {

class DensityMatrix {
public:
    // Zero-initialised n-qubit matrix (not yet a valid state).
    explicit DensityMatrix(int num_qubits);

    // |psi><psi|
    static DensityMatrix from_state(const StateVector& psi);

    static DensityMatrix from_entries(int num_qubits, std::vector<cplx> entries);

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return dim_; }
    const cplx& at(std::size_t row, std::size_t col) const {
        return entries_[row * dim_ + col];
    }
    cplx& at(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
    const std::vector<cplx>& entries() const { return entries_; }

    double trace_real() const;
    bool is_hermitian(double tol = kStateTol) const;

    // Ascending eigenvalues of the Hermitian matrix.
    std::vector<double> eigenvalues() const;

    bool is_positive_semidefinite(double tol = kStateTol) const;

private:
    int num_qubits_;
    std::size_t dim_;
    std::vector<cplx> entries_;  // row-major
};

// Trace out every qubit not in `keep` (0-based, ascending output order).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Sum of |eigenvalues| of the Hermitian difference rho0 - rho1.
double trace_norm_diff(const DensityMatrix& rho0, const DensityMatrix& rho1);

// Optimal success probability for discriminating two equiprobable states:
// 1/2 + (1/4) Tr|rho0 - rho1|.
double helstrom(const DensityMatrix& rho0, const DensityMatrix& rho1);

}  // namespace qpce::qsim
