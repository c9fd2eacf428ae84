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

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace noonsim {

using cplx = std::complex<double>;

/// The four device levels. The enumerator value is the level's block in the
/// basis ordering, so G < E < F < A is part of the file format.
enum class DeviceLevel : int { G = 0, E = 1, F = 2, A = 3 };

inline constexpr std::array<DeviceLevel, 4> kAllLevels{DeviceLevel::G, DeviceLevel::E,
                                                       DeviceLevel::F, DeviceLevel::A};

std::string_view level_name(DeviceLevel level);

struct BasisLabel {
  DeviceLevel level;
  int n1;
  int n2;
  bool operator==(const BasisLabel&) const = default;
};

/// Four device levels tensored with two hard-truncated cavity modes.
///
/// Basis order is level-major, then n1, then n2:
///   index = level * (nmax1+1)(nmax2+1) + n1 * (nmax2+1) + n2.
class CompositeSpace {
 public:
  CompositeSpace(int nmax1, int nmax2);

  int nmax1() const { return nmax1_; }
  int nmax2() const { return nmax2_; }
  std::size_t dim() const { return 4 * block_; }
  std::size_t level_block() const { return block_; }

  std::size_t index(DeviceLevel level, int n1, int n2) const;
  BasisLabel label(std::size_t index) const;

  bool operator==(const CompositeSpace&) const = default;

 private:
  int nmax1_;
  int nmax2_;
  std::size_t block_;
};

CompositeSpace make_space(int nmax1, int nmax2);

class StateVector {
 public:
  explicit StateVector(const CompositeSpace& space);
  StateVector(const CompositeSpace& space, std::vector<cplx> amplitudes);

  const CompositeSpace& space() const { return space_; }
  std::size_t size() const { return amps_.size(); }
  cplx& operator[](std::size_t i) { return amps_[i]; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  cplx& at(DeviceLevel level, int n1, int n2) { return amps_[space_.index(level, n1, n2)]; }
  cplx at(DeviceLevel level, int n1, int n2) const { return amps_[space_.index(level, n1, n2)]; }
  std::span<cplx> amplitudes() { return amps_; }
  std::span<const cplx> amplitudes() const { return amps_; }

  double norm() const;
  /// <this|other>
  cplx inner(const StateVector& other) const;
  StateVector& operator+=(const StateVector& other);
  StateVector& operator*=(cplx s);

 private:
  CompositeSpace space_;
  std::vector<cplx> amps_;
};

StateVector basis_state(const CompositeSpace& space, DeviceLevel level, int n1, int n2);

/// Dense row-major density matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(const CompositeSpace& space);
  static DensityMatrix from_pure(const StateVector& psi);

  const CompositeSpace& space() const { return space_; }
  std::size_t dim() const { return space_.dim(); }
  cplx& operator()(std::size_t r, std::size_t c) { return elems_[r * dim() + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return elems_[r * dim() + c]; }
  cplx* data() { return elems_.data(); }
  const cplx* data() const { return elems_.data(); }
  std::span<cplx> elements() { return elems_; }
  std::span<const cplx> elements() const { return elems_; }

  cplx trace() const;
  /// max |rho - rho^dagger| over all elements.
  double hermiticity_residual() const;
  DensityMatrix adjoint() const;

 private:
  CompositeSpace space_;
  std::vector<cplx> elems_;
};

class SparseOperator {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    cplx value;
  };

  /// Duplicate (row, col) pairs are summed; entries that sum to exactly zero
  /// are dropped.
  SparseOperator(const CompositeSpace& space, std::vector<Entry> entries);

  static SparseOperator zero(const CompositeSpace& space);
  static SparseOperator identity(const CompositeSpace& space);

  const CompositeSpace& space() const { return space_; }
  std::size_t dim() const { return space_.dim(); }
  std::size_t nnz() const { return cols_.size(); }
  bool empty() const { return cols_.empty(); }

  std::vector<Entry> entries() const;
  cplx value(std::size_t row, std::size_t col) const;
  double max_abs() const;
  /// max |A - A^dagger| over all elements.
  double hermiticity_residual() const;

  SparseOperator dagger() const;
  SparseOperator operator+(const SparseOperator& rhs) const;
  SparseOperator operator-(const SparseOperator& rhs) const;
  SparseOperator operator*(const SparseOperator& rhs) const;
  SparseOperator operator*(cplx s) const;
  friend SparseOperator operator*(cplx s, const SparseOperator& op) { return op * s; }

  StateVector apply(const StateVector& psi) const;

  /// out += coeff * (this * M) for a dense row-major M with dim() rows of
  /// `cols` entries each.
  void accumulate_product(cplx coeff, const cplx* m, cplx* out, std::size_t cols) const;

  // CSR views.
  std::span<const std::size_t> row_offsets() const { return row_ptr_; }
  std::span<const std::size_t> col_indices() const { return cols_; }
  std::span<const cplx> values() const { return vals_; }

 private:
  CompositeSpace space_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<cplx> vals_;
};

/// Photon annihilation operator of cavity 1 or 2 with hard truncation.
SparseOperator annihilation(const CompositeSpace& space, int cavity);
SparseOperator creation(const CompositeSpace& space, int cavity);
SparseOperator number_operator(const CompositeSpace& space, int cavity);

/// |upper><lower| on the device, identity on both cavities. upper != lower.
SparseOperator transition(const CompositeSpace& space, DeviceLevel upper, DeviceLevel lower);

/// |level><level| on the device, identity on both cavities.
SparseOperator projector(const CompositeSpace& space, DeviceLevel level);

/// tr(op * rho).
cplx expectation(const SparseOperator& op, const DensityMatrix& rho);

}  // namespace noonsim
