#include "tfelab/banded.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include <lapacke.h>

namespace tfelab {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
      ab_(static_cast<size_t>(ldab_) * static_cast<size_t>(n), 0.0) {
    if (n <= 0 || kl < 0 || ku < 0)
        throw std::invalid_argument("BandedMatrix: bad dimensions");
}

void BandedMatrix::zero() { std::fill(ab_.begin(), ab_.end(), 0.0); }

double& BandedMatrix::at(int i, int j) {
    // dgbsv layout: A(i,j) stored at AB(kl+ku+i-j, j) (0-based rows).
    assert(i >= 0 && i < n_ && j >= 0 && j < n_);
    assert(j - i <= ku_ && i - j <= kl_);
    return ab_[static_cast<size_t>(j) * ldab_ +
               static_cast<size_t>(kl_ + ku_ + i - j)];
}

void BandedMatrix::add(int i, int j, double v) { at(i, j) += v; }
void BandedMatrix::set(int i, int j, double v) { at(i, j) = v; }
double BandedMatrix::get(int i, int j) const {
    return const_cast<BandedMatrix*>(this)->at(i, j);
}

bool BandedMatrix::solve(std::vector<double>& rhs) {
    if (static_cast<int>(rhs.size()) != n_)
        throw std::invalid_argument("BandedMatrix::solve: size mismatch");
    std::vector<lapack_int> ipiv(static_cast<size_t>(n_));
    const lapack_int info = LAPACKE_dgbsv(
        LAPACK_COL_MAJOR, n_, kl_, ku_, 1, ab_.data(), ldab_, ipiv.data(),
        rhs.data(), n_);
    return info == 0;
}

}  // namespace tfelab
