// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <complex>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "risopt/dipole.hpp"
#include "risopt/emf.hpp"
#include "risopt/errors.hpp"

namespace risopt {

/// All fixed impedances of the coupled-dipole model [Ohm].
///
/// z_ts / z_rs are the TX-to-RIS and RX-to-RIS mutual-impedance rows; the
/// corresponding columns z_st / z_sr are their transposes by reciprocity and
/// are exposed as accessors rather than stored.
struct ImpedanceSet {
  std::complex<double> z_tt{0.0, 0.0};
  std::complex<double> z_rr{0.0, 0.0};
  std::complex<double> z_tr{0.0, 0.0};
  Eigen::RowVectorXcd z_ts;
  Eigen::RowVectorXcd z_rs;
  Eigen::MatrixXcd z_ss;

  int n() const { return static_cast<int>(z_ss.rows()); }

  Eigen::VectorXcd z_st() const { return z_ts.transpose(); }
  Eigen::VectorXcd z_sr() const { return z_rs.transpose(); }
  std::complex<double> z_rt() const { return z_tr; }

  void validate(double reciprocity_rel_tol = 0.0) const {
    const int nn = n();
    if (z_ss.cols() != nn || z_ts.size() != nn || z_rs.size() != nn) {
      throw FileFormatError("impedance set dimensions disagree");
    }
    double max_abs = 0.0;
    for (int p = 0; p < nn; ++p) {
      for (int q = 0; q < nn; ++q) max_abs = std::max(max_abs, std::abs(z_ss(p, q)));
    }
    for (int p = 0; p < nn; ++p) {
      for (int q = p + 1; q < nn; ++q) {
        const double diff = std::abs(z_ss(p, q) - z_ss(q, p));
        if (diff > reciprocity_rel_tol * max_abs) {
          throw FileFormatError("Z_SS violates reciprocity at (" +
                                std::to_string(p) + "," + std::to_string(q) + ")");
        }
      }
    }
  }
};

/// Controls for impedance assembly.
struct AssemblyOptions {
  QuadratureOptions quadrature;
  bool include_direct_link = false;
  int threads = 0;  // 0 = hardware concurrency
};

namespace detail {

template <class F>
inline void parallel_for(int count, int threads, F&& body) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  std::atomic<int> next{0};
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Synthesizes every fixed impedance of a scenario.
///
/// Each unordered pair is integrated exactly once and mirrored, so
/// reciprocity holds to the last stored digit. Work items are independent
/// and write to preallocated slots; the result is bit-identical for any
/// thread count.
inline ImpedanceSet assemble_impedances(const Scenario& s,
                                        const AssemblyOptions& opts = {}) {
  s.validate();
  const int nn = s.n_ris();
  ImpedanceSet iset;
  iset.z_ts.resize(nn);
  iset.z_rs.resize(nn);
  iset.z_ss.resize(nn, nn);

  struct Task {
    const Dipole* a;
    const Dipole* b;         // nullptr for self terms
    std::complex<double>* out;
  };
  std::vector<Task> tasks;
  tasks.reserve(static_cast<size_t>(nn) * (nn + 5) / 2);
  tasks.push_back({&s.tx, nullptr, &iset.z_tt});
  tasks.push_back({&s.rx, nullptr, &iset.z_rr});
  if (opts.include_direct_link) {
    tasks.push_back({&s.tx, &s.rx, &iset.z_tr});
  } else {
    iset.z_tr = 0.0;
  }
  for (int q = 0; q < nn; ++q) {
    tasks.push_back({&s.tx, &s.ris_elements[q], &iset.z_ts[q]});
    tasks.push_back({&s.rx, &s.ris_elements[q], &iset.z_rs[q]});
    tasks.push_back({&s.ris_elements[q], nullptr, &iset.z_ss(q, q)});
    for (int p = q + 1; p < nn; ++p) {
      tasks.push_back({&s.ris_elements[q], &s.ris_elements[p], &iset.z_ss(q, p)});
    }
  }

  detail::parallel_for(static_cast<int>(tasks.size()), opts.threads, [&](int i) {
    const Task& t = tasks[static_cast<size_t>(i)];
    *t.out = t.b ? mutual_impedance(*t.a, *t.b, s.wavelength, opts.quadrature)
                 : self_impedance(*t.a, s.wavelength, opts.quadrature);
  });

  for (int q = 0; q < nn; ++q) {
    for (int p = q + 1; p < nn; ++p) iset.z_ss(p, q) = iset.z_ss(q, p);
  }
  return iset;
}

namespace detail {

inline nlohmann::json complex_to_json(const std::complex<double>& z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

inline std::complex<double> complex_from_json(const nlohmann::json& j,
                                              const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw FileFormatError(std::string("expected [re, im] pair for ") + what);
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

inline nlohmann::json impedances_to_json(const ImpedanceSet& iset) {
  nlohmann::json j;
  j["n_ris"] = iset.n();
  j["z_tt"] = detail::complex_to_json(iset.z_tt);
  j["z_rr"] = detail::complex_to_json(iset.z_rr);
  j["z_tr"] = detail::complex_to_json(iset.z_tr);
  auto row_to_json = [](const Eigen::RowVectorXcd& row) {
    nlohmann::json arr = nlohmann::json::array();
    for (int i = 0; i < row.size(); ++i) arr.push_back(detail::complex_to_json(row[i]));
    return arr;
  };
  j["z_ts"] = row_to_json(iset.z_ts);
  j["z_rs"] = row_to_json(iset.z_rs);
  nlohmann::json rows = nlohmann::json::array();
  for (int p = 0; p < iset.n(); ++p) {
    nlohmann::json r = nlohmann::json::array();
    for (int q = 0; q < iset.n(); ++q) r.push_back(detail::complex_to_json(iset.z_ss(p, q)));
    rows.push_back(std::move(r));
  }
  j["z_ss"] = std::move(rows);
  return j;
}

inline ImpedanceSet impedances_from_json(const nlohmann::json& j) {
  if (!j.contains("n_ris") || !j["n_ris"].is_number_integer()) {
    throw FileFormatError("impedance file is missing integer n_ris");
  }
  const int nn = j["n_ris"].get<int>();
  if (nn < 1) throw FileFormatError("n_ris must be at least 1");
  ImpedanceSet iset;
  iset.z_tt = detail::complex_from_json(j.at("z_tt"), "z_tt");
  iset.z_rr = detail::complex_from_json(j.at("z_rr"), "z_rr");
  iset.z_tr = detail::complex_from_json(j.at("z_tr"), "z_tr");
  auto row_from_json = [&](const nlohmann::json& arr, const char* what) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != nn) {
      throw FileFormatError(std::string(what) + " must hold n_ris entries");
    }
    Eigen::RowVectorXcd row(nn);
    for (int i = 0; i < nn; ++i) row[i] = detail::complex_from_json(arr[i], what);
    return row;
  };
  iset.z_ts = row_from_json(j.at("z_ts"), "z_ts");
  iset.z_rs = row_from_json(j.at("z_rs"), "z_rs");
  const nlohmann::json& zss = j.at("z_ss");
  if (!zss.is_array() || static_cast<int>(zss.size()) != nn) {
    throw FileFormatError("z_ss must hold n_ris rows");
  }
  iset.z_ss.resize(nn, nn);
  for (int p = 0; p < nn; ++p) {
    const nlohmann::json& row = zss[p];
    if (!row.is_array() || static_cast<int>(row.size()) != nn) {
      throw FileFormatError("z_ss row " + std::to_string(p) + " has wrong length");
    }
    for (int q = 0; q < nn; ++q) iset.z_ss(p, q) = detail::complex_from_json(row[q], "z_ss");
  }
  iset.validate(1e-12);
  return iset;
}

inline void save_impedances(const ImpedanceSet& iset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FileFormatError("cannot open impedance file for writing: " + path);
  out << impedances_to_json(iset).dump(1) << "\n";
}

inline ImpedanceSet load_impedances(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError("cannot open impedance file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FileFormatError(std::string("impedance file is not valid JSON: ") + e.what());
  }
  return impedances_from_json(j);
}

}  // namespace risopt
