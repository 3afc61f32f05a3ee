// Direct solver for banded linear systems (the Newton systems are
// pentadiagonal: kl = ku = 2).
#pragma once

#include <vector>

namespace tfelab {

// General banded matrix in LAPACK band storage, solved by banded LU with
// partial pivoting (dgbsv).
class BandedMatrix {
  public:
    BandedMatrix(int n, int kl, int ku);

    int size() const { return n_; }
    void zero();

    // Valid for |i - j| within the band; other pairs are silently outside
    // the matrix and must not be addressed.
    void add(int i, int j, double v);
    void set(int i, int j, double v);
    double get(int i, int j) const;

    // Solves A x = rhs in place; A is overwritten by its factorization.
    // Returns false when the factorization is singular.
    bool solve(std::vector<double>& rhs);

  private:
    int n_, kl_, ku_, ldab_;
    std::vector<double> ab_;  // column-major, ldab_ x n_

    double& at(int i, int j);
};

}  // namespace tfelab
