// Copyright 2026 The aperlab Authors
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

#include "aperlab/approx.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "aperlab/parallel.hpp"
#include "aperlab/zoo.hpp"

namespace aperlab {
namespace {

std::string format_freq(const Point& f) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < f.size(); ++i) os << (i ? ", " : "") << f[i];
  os << ")";
  return os.str();
}

}  // namespace

FunctionHandle FitResult::polynomial() const { return zoo::trig_poly(freqs, coeffs); }

FitResult fit_trig_poly(const FunctionHandle& f, const CompactWindow& w,
                        const std::vector<Point>& freqs, const MetricSpec& spec) {
  if (spec.phi.kind != Phi::Kind::kIdentity || spec.weight.kind != Weight::Kind::kConstOne ||
      (spec.norm.kind != Norm::Kind::kSup && spec.norm.kind != Norm::Kind::kL1)) {
    throw Error(ErrorCode::kConfiguration, "fitting supports phi = identity, weight 1, sup or L1");
  }
  if (freqs.empty()) throw Error(ErrorCode::kConfiguration, "no frequencies to fit");
  if (f.codomain_dim() > 2) throw Error(ErrorCode::kShape, "fitting needs a real or complex F");
  for (const auto& lam : freqs) {
    if (lam.size() != f.dimension()) throw Error(ErrorCode::kShape, "frequency dimension mismatch");
  }
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    for (std::size_t k = j + 1; k < freqs.size(); ++k) {
      if (freqs[j] == freqs[k]) {
        throw Error(ErrorCode::kConditioning,
                    "repeated frequency " + format_freq(freqs[j]));
      }
    }
  }
  const Grid grid = make_grid(w, f.domain());
  const std::size_t rows = grid.size();
  const std::size_t cols = freqs.size();
  if (rows < cols) {
    throw Error(ErrorCode::kConfiguration, "grid has fewer points than frequencies");
  }

  using Complex = std::complex<double>;
  const auto row_data = parallel_map(rows, [&](std::size_t i) {
    const Point t = grid.point(i);
    std::vector<Complex> row(cols + 1);
    for (std::size_t j = 0; j < cols; ++j) {
      double phase = 0.0;
      for (std::size_t d = 0; d < t.size(); ++d) phase += freqs[j][d] * t[d];
      row[j] = std::polar(1.0, phase);
    }
    const Value v = f.evaluate(t).value;
    row[cols] = v.size() == 2 ? Complex(v[0], v[1]) : Complex(v[0], 0.0);
    return row;
  });
  Eigen::MatrixXcd a(rows, cols);
  Eigen::VectorXcd y(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = row_data[i][j];
    y(i) = row_data[i][cols];
  }

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  const double condition = smin > 0.0 ? smax / smin : kInf;
  if (!(condition <= kMaxCondition)) {
    // Name the pair of design columns that are closest to parallel.
    double worst = -1.0;
    std::size_t wj = 0;
    std::size_t wk = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t k = j + 1; k < cols; ++k) {
        const double c = std::abs(a.col(j).dot(a.col(k))) / (a.col(j).norm() * a.col(k).norm());
        if (c > worst) {
          worst = c;
          wj = j;
          wk = k;
        }
      }
    }
    std::ostringstream os;
    os.precision(6);
    os << "design matrix condition " << condition << " exceeds 1e12";
    if (cols > 1) {
      os << "; frequencies " << format_freq(freqs[wj]) << " and " << format_freq(freqs[wk])
         << " alias on this grid";
    }
    throw Error(ErrorCode::kConditioning, os.str());
  }
  const Eigen::VectorXcd c = svd.solve(y);

  FitResult out;
  out.freqs = freqs;
  out.condition = condition;
  for (std::size_t j = 0; j < cols; ++j) out.coeffs.push_back(c(static_cast<Eigen::Index>(j)));
  out.residual = approx_error(f, out.polynomial(), w, spec);
  return out;
}

StrongApproxTable levitan_strong_approx_check(const FunctionHandle& f,
                                              const std::vector<FunctionHandle>& poly_seq,
                                              const std::vector<CompactWindow>& windows,
                                              const MetricSpec& spec, double threshold) {
  if (poly_seq.empty()) throw Error(ErrorCode::kConfiguration, "empty polynomial sequence");
  StrongApproxTable table;
  for (const auto& p : poly_seq) {
    std::vector<DefectResult> row;
    for (const auto& w : windows) row.push_back(approx_error(f, p, w, spec));
    table.errors.push_back(std::move(row));
  }
  table.pass = true;
  for (std::size_t j = 0; j < windows.size(); ++j) {
    bool mono = true;
    for (std::size_t k = 1; k < poly_seq.size(); ++k) {
      mono = mono && table.errors[k][j].value <= table.errors[k - 1][j].value;
    }
    const bool conv = table.errors.back()[j].value <= threshold;
    table.monotone.push_back(mono);
    table.converged.push_back(conv);
    table.pass = table.pass && conv;
  }
  return table;
}

}  // namespace aperlab
