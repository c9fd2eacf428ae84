// Copyright 2026 The noonsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "noonsim/fockspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "noonsim/kernels.hpp"

namespace noonsim {

namespace {

void require_same_space(const CompositeSpace& a, const CompositeSpace& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": operand spaces differ (dimension mismatch)");
  }
}

}  // namespace

std::string_view level_name(DeviceLevel level) {
  switch (level) {
    case DeviceLevel::G:
      return "g";
    case DeviceLevel::E:
      return "e";
    case DeviceLevel::F:
      return "f";
    case DeviceLevel::A:
      return "a";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// CompositeSpace

CompositeSpace::CompositeSpace(int nmax1, int nmax2) : nmax1_(nmax1), nmax2_(nmax2), block_(0) {
  if (nmax1 < 1 || nmax2 < 1) {
    throw std::invalid_argument("cavity truncation must be >= 1 photon (got nmax1=" +
                                std::to_string(nmax1) + ", nmax2=" + std::to_string(nmax2) + ")");
  }
  block_ = static_cast<std::size_t>(nmax1 + 1) * static_cast<std::size_t>(nmax2 + 1);
}

std::size_t CompositeSpace::index(DeviceLevel level, int n1, int n2) const {
  const int l = static_cast<int>(level);
  if (l < 0 || l > 3) {
    throw std::out_of_range("invalid device level");
  }
  if (n1 < 0 || n1 > nmax1_ || n2 < 0 || n2 > nmax2_) {
    throw std::out_of_range("photon numbers (" + std::to_string(n1) + ", " + std::to_string(n2) +
                            ") outside truncation (" + std::to_string(nmax1_) + ", " +
                            std::to_string(nmax2_) + ")");
  }
  return static_cast<std::size_t>(l) * block_ +
         static_cast<std::size_t>(n1) * static_cast<std::size_t>(nmax2_ + 1) +
         static_cast<std::size_t>(n2);
}

BasisLabel CompositeSpace::label(std::size_t index) const {
  if (index >= dim()) {
    throw std::out_of_range("basis index " + std::to_string(index) + " >= dim " +
                            std::to_string(dim()));
  }
  const auto level = static_cast<DeviceLevel>(index / block_);
  const std::size_t rem = index % block_;
  const auto stride = static_cast<std::size_t>(nmax2_ + 1);
  return {level, static_cast<int>(rem / stride), static_cast<int>(rem % stride)};
}

CompositeSpace make_space(int nmax1, int nmax2) { return CompositeSpace(nmax1, nmax2); }

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(const CompositeSpace& space) : space_(space), amps_(space.dim()) {}

StateVector::StateVector(const CompositeSpace& space, std::vector<cplx> amplitudes)
    : space_(space), amps_(std::move(amplitudes)) {
  if (amps_.size() != space_.dim()) {
    throw std::invalid_argument("amplitude vector length does not match space dimension");
  }
}

double StateVector::norm() const {
  return std::sqrt(kernels::active().cdotc(amps_.data(), amps_.data(), amps_.size()).real());
}

cplx StateVector::inner(const StateVector& other) const {
  require_same_space(space_, other.space_, "inner product");
  return kernels::active().cdotc(amps_.data(), other.amps_.data(), amps_.size());
}

StateVector& StateVector::operator+=(const StateVector& other) {
  require_same_space(space_, other.space_, "state addition");
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    amps_[i] += other.amps_[i];
  }
  return *this;
}

StateVector& StateVector::operator*=(cplx s) {
  for (auto& a : amps_) {
    a *= s;
  }
  return *this;
}

StateVector basis_state(const CompositeSpace& space, DeviceLevel level, int n1, int n2) {
  StateVector psi(space);
  psi[space.index(level, n1, n2)] = 1.0;
  return psi;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(const CompositeSpace& space)
    : space_(space), elems_(space.dim() * space.dim()) {}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  DensityMatrix rho(psi.space());
  const std::size_t n = psi.size();
  for (std::size_t r = 0; r < n; ++r) {
    if (psi[r] == cplx{}) {
      continue;
    }
    for (std::size_t c = 0; c < n; ++c) {
      rho(r, c) = psi[r] * std::conj(psi[c]);
    }
  }
  return rho;
}

cplx DensityMatrix::trace() const {
  cplx t{};
  for (std::size_t i = 0; i < dim(); ++i) {
    t += (*this)(i, i);
  }
  return t;
}

double DensityMatrix::hermiticity_residual() const {
  double worst = 0.0;
  const std::size_t n = dim();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r; c < n; ++c) {
      worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    }
  }
  return worst;
}

DensityMatrix DensityMatrix::adjoint() const {
  DensityMatrix out(space_);
  const std::size_t n = dim();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      out(c, r) = std::conj((*this)(r, c));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SparseOperator

SparseOperator::SparseOperator(const CompositeSpace& space, std::vector<Entry> entries)
    : space_(space) {
  const std::size_t n = space.dim();
  for (const auto& e : entries) {
    if (e.row >= n || e.col >= n) {
      throw std::out_of_range("operator entry (" + std::to_string(e.row) + ", " +
                              std::to_string(e.col) + ") outside dim " + std::to_string(n));
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_ptr_.assign(n + 1, 0);
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    cplx sum{};
    while (j < entries.size() && entries[j].row == entries[i].row &&
           entries[j].col == entries[i].col) {
      sum += entries[j].value;
      ++j;
    }
    if (sum != cplx{}) {
      cols_.push_back(entries[i].col);
      vals_.push_back(sum);
      ++row_ptr_[entries[i].row + 1];
    }
    i = j;
  }
  for (std::size_t r = 0; r < n; ++r) {
    row_ptr_[r + 1] += row_ptr_[r];
  }
}

SparseOperator SparseOperator::zero(const CompositeSpace& space) { return {space, {}}; }

SparseOperator SparseOperator::identity(const CompositeSpace& space) {
  std::vector<Entry> e;
  e.reserve(space.dim());
  for (std::size_t i = 0; i < space.dim(); ++i) {
    e.push_back({i, i, 1.0});
  }
  return {space, std::move(e)};
}

std::vector<SparseOperator::Entry> SparseOperator::entries() const {
  std::vector<Entry> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < dim(); ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      out.push_back({r, cols_[k], vals_[k]});
    }
  }
  return out;
}

cplx SparseOperator::value(std::size_t row, std::size_t col) const {
  if (row >= dim() || col >= dim()) {
    throw std::out_of_range("operator index out of range");
  }
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) {
    return {};
  }
  return vals_[static_cast<std::size_t>(it - cols_.begin())];
}

double SparseOperator::max_abs() const {
  double m = 0.0;
  for (const auto& v : vals_) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

double SparseOperator::hermiticity_residual() const { return (*this - dagger()).max_abs(); }

SparseOperator SparseOperator::dagger() const {
  std::vector<Entry> e = entries();
  for (auto& x : e) {
    std::swap(x.row, x.col);
    x.value = std::conj(x.value);
  }
  return {space_, std::move(e)};
}

SparseOperator SparseOperator::operator+(const SparseOperator& rhs) const {
  require_same_space(space_, rhs.space_, "operator addition");
  std::vector<Entry> e = entries();
  const auto r = rhs.entries();
  e.insert(e.end(), r.begin(), r.end());
  return {space_, std::move(e)};
}

SparseOperator SparseOperator::operator-(const SparseOperator& rhs) const {
  return *this + rhs * cplx(-1.0);
}

SparseOperator SparseOperator::operator*(cplx s) const {
  std::vector<Entry> e = entries();
  for (auto& x : e) {
    x.value *= s;
  }
  return {space_, std::move(e)};
}

SparseOperator SparseOperator::operator*(const SparseOperator& rhs) const {
  require_same_space(space_, rhs.space_, "operator product");
  std::vector<Entry> e;
  for (std::size_t r = 0; r < dim(); ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const std::size_t mid = cols_[k];
      for (std::size_t q = rhs.row_ptr_[mid]; q < rhs.row_ptr_[mid + 1]; ++q) {
        e.push_back({r, rhs.cols_[q], vals_[k] * rhs.vals_[q]});
      }
    }
  }
  return {space_, std::move(e)};
}

StateVector SparseOperator::apply(const StateVector& psi) const {
  require_same_space(space_, psi.space(), "operator application");
  StateVector out(space_);
  for (std::size_t r = 0; r < dim(); ++r) {
    cplx acc{};
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      acc += vals_[k] * psi[cols_[k]];
    }
    out[r] = acc;
  }
  return out;
}

void SparseOperator::accumulate_product(cplx coeff, const cplx* m, cplx* out,
                                        std::size_t cols) const {
  const auto& k = kernels::active();
  for (std::size_t r = 0; r < dim(); ++r) {
    cplx* out_row = out + r * cols;
    for (std::size_t q = row_ptr_[r]; q < row_ptr_[r + 1]; ++q) {
      k.caxpy(coeff * vals_[q], m + cols_[q] * cols, out_row, cols);
    }
  }
}

// ---------------------------------------------------------------------------
// Elementary operators

SparseOperator annihilation(const CompositeSpace& space, int cavity) {
  if (cavity != 1 && cavity != 2) {
    throw std::invalid_argument("cavity must be 1 or 2 (got " + std::to_string(cavity) + ")");
  }
  std::vector<SparseOperator::Entry> e;
  for (DeviceLevel l : kAllLevels) {
    for (int n1 = 0; n1 <= space.nmax1(); ++n1) {
      for (int n2 = 0; n2 <= space.nmax2(); ++n2) {
        const int n = cavity == 1 ? n1 : n2;
        if (n == 0) {
          continue;
        }
        const std::size_t src = space.index(l, n1, n2);
        const std::size_t dst =
            cavity == 1 ? space.index(l, n1 - 1, n2) : space.index(l, n1, n2 - 1);
        e.push_back({dst, src, std::sqrt(static_cast<double>(n))});
      }
    }
  }
  return {space, std::move(e)};
}

SparseOperator creation(const CompositeSpace& space, int cavity) {
  return annihilation(space, cavity).dagger();
}

SparseOperator number_operator(const CompositeSpace& space, int cavity) {
  return creation(space, cavity) * annihilation(space, cavity);
}

SparseOperator transition(const CompositeSpace& space, DeviceLevel upper, DeviceLevel lower) {
  if (upper == lower) {
    throw std::invalid_argument("transition requires distinct levels; use projector() for |j><j|");
  }
  std::vector<SparseOperator::Entry> e;
  e.reserve(space.level_block());
  for (int n1 = 0; n1 <= space.nmax1(); ++n1) {
    for (int n2 = 0; n2 <= space.nmax2(); ++n2) {
      e.push_back({space.index(upper, n1, n2), space.index(lower, n1, n2), 1.0});
    }
  }
  return {space, std::move(e)};
}

SparseOperator projector(const CompositeSpace& space, DeviceLevel level) {
  std::vector<SparseOperator::Entry> e;
  e.reserve(space.level_block());
  for (int n1 = 0; n1 <= space.nmax1(); ++n1) {
    for (int n2 = 0; n2 <= space.nmax2(); ++n2) {
      const std::size_t i = space.index(level, n1, n2);
      e.push_back({i, i, 1.0});
    }
  }
  return {space, std::move(e)};
}

cplx expectation(const SparseOperator& op, const DensityMatrix& rho) {
  require_same_space(op.space(), rho.space(), "expectation");
  const auto rows = op.row_offsets();
  const auto cols = op.col_indices();
  const auto vals = op.values();
  cplx acc{};
  for (std::size_t r = 0; r < op.dim(); ++r) {
    for (std::size_t q = rows[r]; q < rows[r + 1]; ++q) {
      acc += vals[q] * rho(cols[q], r);
    }
  }
  return acc;
}

}  // namespace noonsim
