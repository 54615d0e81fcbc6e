#pragma once

#include "ncg/lattice.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace ncg {

/// Declarative description of one experiment run; everything needed to
/// reproduce every emitted record.
struct ExperimentConfig {
  std::string experiment;  // chern | index | sigma12 | identity-check | decay | convergence | oracle
  HoppingModel model;
  std::string geometry_kind = "torus";
  double fermi_level = 0.0;
  std::vector<int> sizes;            // torus L or box radius sweep
  std::vector<std::uint64_t> seeds;  // disorder seeds (also drive random shifts)
  int interior_radius = -1;          // default: size/2
  int x0_grid = 3;                   // midpoint quadrature per axis
  int x0_samples = 1;                // random shifts for index runs
  double cutoff = 200.0;             // identity-check lattice cutoff
  std::vector<std::vector<int>> points;  // identity-check point configurations (flattened runs)
  double tolerance = 0.05;
  int summability_power = 2;
  double gap_threshold = 1e-6;
  std::string out_dir = ".";
};

namespace detail {

inline Matrix parse_block(const nlohmann::json& j, int Q) {
  Matrix m = Matrix::Zero(Q, Q);
  const auto& re = j.at("re");
  for (int r = 0; r < Q; ++r)
    for (int c = 0; c < Q; ++c) m(r, c) = cplx(re.at(r).at(c).get<double>(), 0.0);
  if (j.contains("im")) {
    const auto& im = j.at("im");
    for (int r = 0; r < Q; ++r)
      for (int c = 0; c < Q; ++c) m(r, c) += cplx(0.0, im.at(r).at(c).get<double>());
  }
  return m;
}

inline HoppingModel parse_model(const nlohmann::json& j) {
  if (j.contains("builtin")) {
    const std::string name = j.at("builtin").get<std::string>();
    const double m = j.value("m", 1.0);
    const double W = j.value("W", 0.0);
    const double t3 = j.value("t3", 0.0);
    const double t = j.value("t", 0.1);
    if (name == "chern2d") return models::chern2d(m, W);
    if (name == "atomic2d") return models::atomic2d(W);
    if (name == "trivial2d") return models::trivial2d(t, W);
    if (name == "stack3d") return models::stack3d(m, t3, W);
    throw std::invalid_argument("unknown builtin model: " + name);
  }
  HoppingModel model;
  model.d = j.at("d").get<int>();
  model.Q = j.at("Q").get<int>();
  for (const auto& h : j.at("hoppings")) {
    Hopping hop;
    hop.q = h.at("q").get<std::vector<int>>();
    hop.A = parse_block(h, model.Q);
    hop.W = h.value("W", 0.0);
    model.hoppings.push_back(std::move(hop));
  }
  model.validate();
  return model;
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.experiment = j.at("experiment").get<std::string>();
  if (j.contains("model")) cfg.model = detail::parse_model(j.at("model"));
  cfg.geometry_kind = j.value("geometry", std::string("torus"));
  cfg.fermi_level = j.value("fermi_level", 0.0);
  if (j.contains("sizes")) cfg.sizes = j.at("sizes").get<std::vector<int>>();
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  cfg.interior_radius = j.value("interior_radius", -1);
  cfg.x0_grid = j.value("x0_grid", 3);
  cfg.x0_samples = j.value("x0_samples", 1);
  cfg.cutoff = j.value("cutoff", 200.0);
  if (j.contains("points"))
    for (const auto& p : j.at("points")) cfg.points.push_back(p.get<std::vector<int>>());
  cfg.tolerance = j.value("tolerance", 0.05);
  cfg.summability_power = j.value("summability_power", 2);
  cfg.gap_threshold = j.value("gap_threshold", 1e-6);
  cfg.out_dir = j.value("out", std::string("."));

  bool disordered = false;
  for (const auto& h : cfg.model.hoppings) disordered = disordered || h.W != 0.0;
  if (disordered && cfg.seeds.empty())
    throw std::invalid_argument("config: disordered model requires a nonempty seed list");
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file: " + path);
  nlohmann::json j;
  is >> j;
  return parse_config(j);
}

}  // namespace ncg
