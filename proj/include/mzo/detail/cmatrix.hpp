#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "mzo/detail/math.hpp"
#include "mzo/errors.hpp"

namespace mzo::detail {

// Dense complex matrix, row-major. Sized for the few-hundred-dimensional
// truncated Fock spaces of the collision oracle and the d x d circuit
// unitaries; no sparsity, no views.
class CMat {
  public:
    CMat() = default;
    CMat(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c) {}

    static CMat identity(std::size_t n) {
        CMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    CMat adjoint() const {
        CMat m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    CMat operator*(const CMat& b) const {
        CMat c(rows_, b.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const cplx aik = (*this)(i, k);
                if (aik == cplx{}) continue;
                const cplx* brow = &b.a_[k * b.cols_];
                cplx* crow = &c.a_[i * b.cols_];
                for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aik * brow[j];
            }
        }
        return c;
    }

    CMat& operator+=(const CMat& b) {
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += b.a_[i];
        return *this;
    }

    CMat& operator*=(cplx s) {
        for (auto& x : a_) x *= s;
        return *this;
    }

    friend CMat operator*(cplx s, CMat m) {
        m *= s;
        return m;
    }

    cplx trace() const {
        cplx t{};
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs_diff_identity() const {
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                const cplx want = (i == j) ? cplx{1.0, 0.0} : cplx{};
                m = std::max(m, std::abs((*this)(i, j) - want));
            }
        return m;
    }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

inline CMat kron(const CMat& a, const CMat& b) {
    CMat c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return c;
}

// Cyclic Jacobi eigensolver for Hermitian matrices. Returns ascending-order
// eigenvalues if sort is requested; V holds the eigenvectors as columns.
struct HermEig {
    std::vector<double> values;
    CMat vectors;
};

inline HermEig hermitian_eig(CMat a, double tol = 1e-13, int max_sweeps = 60) {
    const std::size_t n = a.rows();
    CMat v = CMat::identity(n);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) norm = std::max(norm, std::abs(a(i, j)));
    if (norm == 0.0) norm = 1.0;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off < tol * norm) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx z = a(p, q);
                const double r = std::abs(z);
                if (r < 1e-300) continue;
                const cplx phase = z / r;  // e^{i phi}
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const double theta = (app - aqq) / (2.0 * r);
                const double sgn = theta >= 0.0 ? 1.0 : -1.0;
                const double t = sgn / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx sp = s * phase;             // e^{i phi} s
                const cplx sm = s * std::conj(phase);  // e^{-i phi} s

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp + sm * akq;
                    a(k, q) = -sp * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk + sp * aqk;
                    a(q, k) = -sm * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp + sm * vkq;
                    v(k, q) = -sp * vkp + c * vkq;
                }
            }
        }
    }

    HermEig out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i).real();
    out.vectors = std::move(v);
    return out;
}

// exp(scale * H) for Hermitian H and purely imaginary or real scale, via the
// spectral decomposition. Unitary to roundoff when scale is imaginary.
inline CMat herm_expm(const CMat& h, cplx scale) {
    HermEig e = hermitian_eig(h);
    const std::size_t n = h.rows();
    CMat d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = std::exp(scale * e.values[i]);
    return e.vectors * d * e.vectors.adjoint();
}

}  // namespace mzo::detail
