#pragma once

#include "ncg/cocycle.hpp"
#include "ncg/config.hpp"
#include "ncg/oracle.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>

namespace ncg {

inline constexpr int result_schema_version = 1;

/// One emitted row; params carry everything needed to reproduce the record in
/// isolation, values the computed numbers and residuals.
struct ResultRecord {
  std::string experiment;
  nlohmann::json params;
  nlohmann::json values;
  double wall_time_s = 0.0;
  std::string error;  // empty on success
};

namespace detail {

class StopWatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

/// Random non-integer shift in (0,1)^d, deterministic in the seed.
inline std::vector<double> random_shift(int d, std::uint64_t seed) {
  std::mt19937_64 eng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<double> x0(d);
  for (double& v : x0) v = 0.05 + 0.9 * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
  return x0;
}

inline Geometry make_geometry(const ExperimentConfig& cfg, int size) {
  if (cfg.geometry_kind == "box") return Geometry::box(cfg.model.d, size);
  return Geometry::torus(std::vector<int>(cfg.model.d, size));
}

template <class Fn>
void run_point(std::vector<ResultRecord>& out, const std::string& experiment,
               nlohmann::json params, Fn&& fn) {
  ResultRecord rec;
  rec.experiment = experiment;
  rec.params = std::move(params);
  StopWatch sw;
  try {
    rec.values = fn();
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  rec.wall_time_s = sw.seconds();
  out.push_back(std::move(rec));
}

}  // namespace detail

inline std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg) {
  std::vector<ResultRecord> records;
  const std::vector<std::uint64_t> seeds = cfg.seeds.empty() ? std::vector<std::uint64_t>{0}
                                                             : cfg.seeds;

  if (cfg.experiment == "chern" || cfg.experiment == "sigma12" ||
      cfg.experiment == "convergence") {
    for (int L : cfg.sizes) {
      for (std::uint64_t seed : seeds) {
        detail::run_point(records, cfg.experiment,
                          {{"size", L}, {"seed", seed}, {"fermi_level", cfg.fermi_level}},
                          [&] {
                            Geometry g = Geometry::torus(std::vector<int>(cfg.model.d, L));
                            auto dis = sample_disorder(g, seed);
                            auto H = build_hamiltonian(cfg.model, g, dis);
                            auto p = fermi_projector(H, cfg.fermi_level, cfg.gap_threshold);
                            CocycleResult r = cfg.experiment == "sigma12"
                                                  ? weak_invariant_sigma12(p)
                                                  : local_cocycle({p.p, p.p, p.p});
                            return nlohmann::json{{"value", r.value.real()},
                                                  {"imag_residual", r.imag_residual},
                                                  {"gap", p.gap}};
                          });
      }
    }
  } else if (cfg.experiment == "index") {
    for (int R : cfg.sizes) {
      const int Rp = cfg.interior_radius > 0 ? cfg.interior_radius : R / 2;
      for (std::uint64_t seed : seeds) {
        for (int s = 0; s < cfg.x0_samples; ++s) {
          const auto x0 = detail::random_shift(cfg.model.d, seed * 1000 + s);
          detail::run_point(
              records, cfg.experiment,
              {{"size", R},
               {"interior_radius", Rp},
               {"seed", seed},
               {"x0", x0},
               {"n", cfg.model.d / 2 + 1},
               {"fermi_level", cfg.fermi_level}},
              [&] {
                Geometry g = Geometry::box(cfg.model.d, R);
                auto dis = sample_disorder(g, seed);
                auto H = build_hamiltonian(cfg.model, g, dis);
                auto p = fermi_projector(H, cfg.fermi_level, cfg.gap_threshold);
                auto cl = build_clifford(cfg.model.d);
                auto F = dirac_phase(g, cl, x0, cfg.model.Q);
                const int n = cfg.model.d / 2 + 1;
                const double idx = fedosov_tindex(p, F, n, Rp);
                return nlohmann::json{{"value", idx}, {"gap", p.gap}};
              });
        }
      }
    }
  } else if (cfg.experiment == "identity-check") {
    std::vector<std::vector<std::vector<int>>> runs;
    const int d = cfg.model.d > 0 ? cfg.model.d : 2;
    if (!cfg.points.empty()) {
      if (static_cast<int>(cfg.points.size()) % d != 0)
        throw std::invalid_argument("identity-check: points must come in groups of d");
      for (size_t i = 0; i + d <= cfg.points.size(); i += d)
        runs.push_back({cfg.points.begin() + i, cfg.points.begin() + i + d});
    } else {
      runs = {{{1, 0}, {0, 1}}, {{2, 0}, {0, 1}}, {{1, 1}, {0, 1}}};
    }
    const auto shifts = midpoint_shifts(d, cfg.x0_grid);
    for (const auto& pts : runs) {
      detail::run_point(records, cfg.experiment,
                        {{"d", d}, {"points", pts}, {"cutoff", cfg.cutoff},
                         {"x0_grid", cfg.x0_grid}},
                        [&] {
                          auto chk = central_identity_check(d, pts, cfg.cutoff, shifts);
                          const double rel =
                              std::abs(chk.rhs) > 0 ? std::abs(chk.lhs - chk.rhs) / std::abs(chk.rhs)
                                                    : std::abs(chk.lhs);
                          return nlohmann::json{{"lhs_re", chk.lhs.real()},
                                                {"lhs_im", chk.lhs.imag()},
                                                {"rhs_re", chk.rhs.real()},
                                                {"rhs_im", chk.rhs.imag()},
                                                {"rel_error", rel}};
                        });
    }
  } else if (cfg.experiment == "decay") {
    for (int L : cfg.sizes) {
      for (std::uint64_t seed : seeds) {
        detail::run_point(records, cfg.experiment,
                          {{"size", L}, {"seed", seed}, {"fermi_level", cfg.fermi_level},
                           {"power", cfg.summability_power}},
                          [&] {
                            nlohmann::json vals;
                            if (cfg.geometry_kind == "box") {
                              Geometry g = Geometry::box(cfg.model.d, L);
                              auto dis = sample_disorder(g, seed);
                              auto H = build_hamiltonian(cfg.model, g, dis);
                              auto p = fermi_projector(H, cfg.fermi_level, cfg.gap_threshold);
                              auto cl = build_clifford(cfg.model.d);
                              const auto x0 = detail::random_shift(cfg.model.d, seed);
                              auto F = dirac_phase(g, cl, x0, cfg.model.Q);
                              auto rec = summability_diagnostic(p, F, cfg.summability_power);
                              vals["slope"] = rec.slope;
                              vals["gap"] = p.gap;
                            } else {
                              Geometry g = Geometry::torus(std::vector<int>(cfg.model.d, L));
                              auto dis = sample_disorder(g, seed);
                              auto H = build_hamiltonian(cfg.model, g, dis);
                              auto p = fermi_projector(H, cfg.fermi_level, cfg.gap_threshold);
                              auto prof = locality_profile(p.p);
                              vals["alpha"] = prof.alpha;
                              vals["gap"] = p.gap;
                            }
                            return vals;
                          });
      }
    }
  } else if (cfg.experiment == "oracle") {
    for (int N : cfg.sizes) {
      detail::run_point(records, cfg.experiment,
                        {{"grid", N}, {"fermi_level", cfg.fermi_level}}, [&] {
                          const int c = momentum_oracle_chern(cfg.model, cfg.fermi_level, N);
                          return nlohmann::json{{"value", c}};
                        });
    }
  } else {
    throw std::invalid_argument("unknown experiment kind: " + cfg.experiment);
  }
  return records;
}

// ---------------------------------------------------------------------------
// Emission

inline nlohmann::json to_json(const std::vector<ResultRecord>& records) {
  nlohmann::json out;
  out["schema_version"] = result_schema_version;
  out["records"] = nlohmann::json::array();
  for (const auto& r : records) {
    out["records"].push_back({{"experiment", r.experiment},
                              {"params", r.params},
                              {"values", r.values},
                              {"wall_time_s", r.wall_time_s},
                              {"error", r.error}});
  }
  return out;
}

/// Flattened CSV: one column per scalar key (params.* / values.*), sorted,
/// empty cells where a record lacks a key.
inline void write_csv(const std::vector<ResultRecord>& records, std::ostream& os) {
  std::set<std::string> keys;
  auto scan = [&](const nlohmann::json& obj, const std::string& prefix) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (it.value().is_primitive()) keys.insert(prefix + it.key());
  };
  for (const auto& r : records) {
    scan(r.params, "params.");
    scan(r.values, "values.");
  }
  os << "schema_version,experiment";
  for (const auto& k : keys) os << "," << k;
  os << ",wall_time_s,error\n";
  os.precision(17);
  for (const auto& r : records) {
    os << result_schema_version << "," << r.experiment;
    for (const auto& k : keys) {
      os << ",";
      const bool from_params = k.rfind("params.", 0) == 0;
      const nlohmann::json& obj = from_params ? r.params : r.values;
      const std::string key = k.substr(from_params ? 7 : 7);
      if (obj.contains(key) && obj.at(key).is_primitive() && !obj.at(key).is_null()) {
        const auto& v = obj.at(key);
        if (v.is_number_float())
          os << v.get<double>();
        else
          os << v.dump();
      }
    }
    os << "," << r.wall_time_s << ",\"" << r.error << "\"\n";
  }
}

inline void emit_results(const std::vector<ResultRecord>& records, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream js(out_dir + "/results.json");
    js << to_json(records).dump(2) << "\n";
  }
  {
    std::ofstream cs(out_dir + "/results.csv");
    write_csv(records, cs);
  }
}

}  // namespace ncg
