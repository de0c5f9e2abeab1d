#include "ch/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "ch/errors.hpp"

namespace ch {

namespace {

using nlohmann::ordered_json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps '\n' everywhere
  if (!out) throw IoError("cannot write file: " + path);
  return out;
}

}  // namespace

std::string format_g17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_states_csv(const std::string& path, const SolutionHistory& run) {
  std::ofstream out = open_out(path);
  out << "t,x,y,v\n";
  const Grid g = run.scenario.grid();
  for (const State& s : run.states)
    for (int j = 0; j < g.n_nodes(); ++j)
      out << format_g17(s.t) << ',' << format_g17(g.node(j)) << ',' << format_g17(s.y.values[j])
          << ',' << format_g17(s.v.values[j]) << '\n';
  if (!out) throw IoError("failed while writing " + path);
}

void write_meta_json(const std::string& path, const SolutionHistory& run) {
  ordered_json j;
  j["order"] = run.scenario.order;
  j["kappa"] = run.scenario.kappa;
  j["t_final"] = run.scenario.t_final;
  j["n_cells"] = run.scenario.n_cells;
  j["slab_dt"] = run.scenario.slab_dt;
  j["n_states"] = run.n_states();
  ordered_json slabs = ordered_json::array();
  int total_singular = 0;
  for (const SlabDiag& d : run.slabs) {
    ordered_json s;
    s["t0"] = d.t0;
    s["t1"] = d.t1;
    s["iterations"] = d.iterations;
    s["residual"] = d.residual;
    s["halvings"] = d.halvings;
    s["singular_nodes"] = d.singular_nodes;
    s["bound_margin"] = d.bound_margin;
    slabs.push_back(std::move(s));
    total_singular += d.singular_nodes;
  }
  j["slabs"] = std::move(slabs);
  j["total_singular_nodes"] = total_singular;
  ordered_json part;
  part["breakpoints"] = run.partition.breakpoints;
  part["sign_left"] = run.partition.sign_left;
  part["sign_right"] = run.partition.sign_right;
  j["flux_partition"] = std::move(part);

  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed while writing " + path);
}

void write_energy_report_csv(const std::string& path, const EnergyReport& rep) {
  std::ofstream out = open_out(path);
  out << "t,E,E_left,E_right,identity_residual,energy_margin,aux_margin_left,aux_margin_right,"
         "e_rel,e_rel_margin\n";
  auto at = [](const std::vector<double>& v, size_t k) {
    return k < v.size() ? v[k] : std::nan("");
  };
  for (size_t k = 0; k < rep.times.size(); ++k) {
    out << format_g17(rep.times[k]) << ',' << format_g17(rep.energy[k]) << ','
        << format_g17(rep.energy_left[k]) << ',' << format_g17(rep.energy_right[k]) << ','
        << format_g17(at(rep.identity_residual, k)) << ','
        << format_g17(at(rep.energy_margin, k)) << ',' << format_g17(at(rep.aux_margin_left, k))
        << ',' << format_g17(at(rep.aux_margin_right, k)) << ',' << format_g17(at(rep.e_rel, k))
        << ',' << format_g17(at(rep.e_rel_margin, k)) << '\n';
  }
  if (!out) throw IoError("failed while writing " + path);
}

void write_certificate_json(const std::string& path, const EnergyReport& rep) {
  ordered_json j;
  j["order"] = rep.order;
  ordered_json intervals = ordered_json::array();
  for (const GronwallInterval& iv : rep.certificate.intervals) {
    ordered_json e;
    e["t0"] = iv.t0;
    e["t1"] = iv.t1;
    e["case"] = iv.case_id;
    e["lyapunov_start"] = iv.lyapunov_start;
    e["lyapunov_end"] = iv.lyapunov_end;
    e["c_hat"] = iv.c_hat;
    e["pass"] = iv.pass;
    intervals.push_back(std::move(e));
  }
  j["intervals"] = std::move(intervals);
  j["all_pass"] = rep.certificate.all_pass;
  j["chain_ok"] = rep.certificate.chain_ok;
  j["messages"] = rep.certificate.messages;
  ordered_json consts = ordered_json::array();
  for (const NamedConstant& c : rep.constants) {
    ordered_json e;
    e["name"] = c.name;
    e["value"] = c.value;
    e["kind"] = c.kind;
    consts.push_back(std::move(e));
  }
  j["constants"] = std::move(consts);
  j["notes"] = rep.notes;

  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed while writing " + path);
}

void write_orders_csv(const std::string& path, const std::vector<ConvergenceRow>& rows) {
  std::ofstream out = open_out(path);
  // order cells: empty when undefined (first level), "exact" when the error
  // vanished identically so no rate exists
  auto order_cell = [](double v) -> std::string {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return "exact";
    return format_g17(v);
  };
  out << "n_cells,err_v,err_y,identity_residual,order_v,order_y,order_residual\n";
  for (const ConvergenceRow& r : rows) {
    out << r.n_cells << ',' << format_g17(r.err_v) << ',' << format_g17(r.err_y) << ','
        << format_g17(r.identity_residual) << ',' << order_cell(r.order_v) << ','
        << order_cell(r.order_y) << ',' << order_cell(r.order_residual) << '\n';
  }
  if (!out) throw IoError("failed while writing " + path);
}

}  // namespace ch
