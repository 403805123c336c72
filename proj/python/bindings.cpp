#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "grale/grale.hpp"

namespace py = pybind11;
using namespace grale;

namespace {

std::vector<std::string> attribute_names(const InformationSystem& s) {
  std::vector<std::string> out;
  for (const auto& a : s.attributes()) out.push_back(a.name);
  return out;
}

py::dict accuracy_dict(const AccuracyReport& r) {
  py::dict d;
  d["M"] = r.recommended;
  d["N"] = r.successful;
  d["accuracy"] = r.accuracy ? py::cast(*r.accuracy) : py::none();
  return d;
}

py::dict stats_dict(const ColumnStats& s) {
  py::dict d;
  d["count"] = s.count;
  d["mean"] = s.count ? py::cast(s.mean) : py::none();
  d["stddev"] = s.count ? py::cast(s.stddev) : py::none();
  return d;
}

py::dict summary_dict(const ExperimentSummary& s) {
  py::dict d;
  d["accuracy"] = stats_dict(s.accuracy);
  d["M"] = stats_dict(s.recommended);
  d["train_accuracy"] = stats_dict(s.train_accuracy);
  d["train_M"] = stats_dict(s.train_recommended);
  d["rule_count"] = stats_dict(s.rule_count);
  d["excluded"] = s.excluded;
  d["train_excluded"] = s.train_excluded;
  return d;
}

ExperimentConfig make_config(const std::string& scenario, double ms, double mt, double sc, double tc,
                             double train_fraction, std::size_t reps, std::uint64_t seed, unsigned workers) {
  ExperimentConfig cfg;
  cfg.scenario = parse_scenario(scenario);
  cfg.params = {ms, mt, sc, tc};
  cfg.split = {train_fraction, seed};
  cfg.repetitions = reps;
  cfg.workers = workers;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_grale, m) {
  m.doc() = "Granular association rule mining and cold-start recommendation";

  // Translators run newest first, so the base class is registered first.
  const auto& error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<IngestError>(m, "IngestError", error.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", error.ptr());
  py::register_exception<RuleFileError>(m, "RuleFileError", error.ptr());
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);

  py::class_<Mmer>(m, "Mmer")
      .def_property_readonly("user_count", [](const Mmer& es) { return es.users.object_count(); })
      .def_property_readonly("item_count", [](const Mmer& es) { return es.items.object_count(); })
      .def_property_readonly("rating_count", [](const Mmer& es) { return es.relation.cardinality(); })
      .def_property_readonly("density", [](const Mmer& es) { return es.relation.density(); })
      .def_property_readonly("user_ids", [](const Mmer& es) { return es.users.object_ids(); })
      .def_property_readonly("item_ids", [](const Mmer& es) { return es.items.object_ids(); })
      .def_property_readonly("user_attributes", [](const Mmer& es) { return attribute_names(es.users); })
      .def_property_readonly("item_attributes", [](const Mmer& es) { return attribute_names(es.items); })
      .def("fingerprint", [](const Mmer& es) { return fingerprint(es); })
      .def("dump_generic", [](const Mmer& es, const std::filesystem::path& dir) { dump_generic(es, dir); },
           py::arg("out_dir"))
      .def("__repr__", [](const Mmer& es) {
        return "<Mmer users=" + std::to_string(es.users.object_count()) +
               " items=" + std::to_string(es.items.object_count()) +
               " ratings=" + std::to_string(es.relation.cardinality()) + ">";
      });

  py::class_<RuleSet>(m, "RuleSet")
      .def("__len__", &RuleSet::size)
      .def_property_readonly("fingerprint", [](const RuleSet& rs) { return rs.fingerprint; })
      .def_property_readonly("params",
                             [](const RuleSet& rs) {
                               py::dict d;
                               d["ms"] = rs.params.ms;
                               d["mt"] = rs.params.mt;
                               d["sc"] = rs.params.sc;
                               d["tc"] = rs.params.tc;
                               return d;
                             })
      .def_property_readonly("rules",
                             [](const RuleSet& rs) {
                               py::list out;
                               for (const auto& r : rs.rules) {
                                 py::dict d;
                                 d["source"] = format_descriptor(rs.user_attributes, r.rule.source);
                                 d["target"] = format_descriptor(rs.item_attributes, r.rule.target);
                                 d["scov"] = r.measures.scov;
                                 d["tcov"] = r.measures.tcov;
                                 d["sconf"] = r.measures.sconf;
                                 out.append(d);
                               }
                               return out;
                             })
      .def("to_text", [](const RuleSet& rs) { return format_rules(rs); })
      .def("save", [](const RuleSet& rs, const std::filesystem::path& p) { save_rules(rs, p); }, py::arg("path"));

  m.def("load_movielens", &load_movielens, py::arg("data_dir"), py::call_guard<py::gil_scoped_release>());
  m.def("load_generic", &load_generic, py::arg("data_dir"), py::call_guard<py::gil_scoped_release>());

  m.def(
      "mine",
      [](const Mmer& es, double ms, double mt, double sc, double tc, unsigned workers) {
        py::gil_scoped_release release;
        return mine(es, {ms, mt, sc, tc}, workers);
      },
      py::arg("mmer"), py::arg("ms"), py::arg("mt"), py::arg("sc") = 0.3, py::arg("tc") = 0.3,
      py::arg("workers") = 1);

  m.def(
      "load_rules",
      [](const std::filesystem::path& path, const Mmer& es) {
        auto loaded = load_rules(path, es);
        return py::make_tuple(std::move(loaded.rules), loaded.warnings);
      },
      py::arg("path"), py::arg("mmer"));

  m.def(
      "enumerate_granules",
      [](const Mmer& es, const std::string& side, double min_support) {
        if (side != "users" && side != "items") throw ContractViolation("side must be 'users' or 'items'");
        const auto& system = side == "users" ? es.users : es.items;
        const auto set = enumerate_granules(system, min_support);
        py::list out;
        for (const auto& g : set.granules)
          out.append(py::make_tuple(format_descriptor(system, g.descriptor), g.support, g.extent_size()));
        return out;
      },
      py::arg("mmer"), py::arg("side"), py::arg("min_support"));

  m.def(
      "recommend",
      [](const RuleSet& rs, const Mmer& es) {
        const auto recs = recommend(rs, es.users, es.items);
        py::dict per_user;
        for (std::size_t x = 0; x < recs.user_count(); ++x) {
          if (recs.items[x].none()) continue;
          py::list items;
          recs.items[x].for_each([&](std::size_t y) { items.append(es.items.object_ids()[y]); });
          per_user[py::str(es.users.object_ids()[x])] = items;
        }
        py::dict out = accuracy_dict(score(recs, es.relation));
        out["recommendations"] = per_user;
        return out;
      },
      py::arg("rules"), py::arg("mmer"));

  m.def(
      "evaluate",
      [](const Mmer& es, const std::string& scenario, double ms, double mt, double sc, double tc,
         double train_fraction, std::size_t reps, std::uint64_t seed, unsigned workers) {
        const auto cfg = make_config(scenario, ms, mt, sc, tc, train_fraction, reps, seed, workers);
        ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = run_experiment(es, cfg);
        }
        py::list rows;
        for (const auto& r : report.rows) {
          py::dict d = accuracy_dict(r.test);
          d["rep"] = r.rep;
          d["rule_count"] = r.rule_count;
          d["train_accuracy"] = r.train && r.train->accuracy ? py::cast(*r.train->accuracy) : py::none();
          rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["summary"] = summary_dict(report.summary());
        out["csv"] = format_report_csv(report);
        return out;
      },
      py::arg("mmer"), py::arg("scenario") = "both-new", py::arg("ms") = 0.04, py::arg("mt") = 0.04,
      py::arg("sc") = 0.3, py::arg("tc") = 0.3, py::arg("train_fraction") = 0.6, py::arg("reps") = 20,
      py::arg("seed") = 0, py::arg("workers") = 1);

  m.def(
      "sweep",
      [](const Mmer& es, const std::vector<double>& grid, const std::string& scenario, double sc, double tc,
         double train_fraction, std::size_t reps, std::uint64_t seed, unsigned workers) {
        const double first = grid.empty() ? 1.0 : grid.front();
        const auto cfg = make_config(scenario, first, first, sc, tc, train_fraction, reps, seed, workers);
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = sweep(es, cfg, grid);
        }
        py::list out_rows;
        for (const auto& row : rows) {
          py::dict d = summary_dict(row.report.summary());
          d["x"] = row.threshold;
          out_rows.append(d);
        }
        py::dict out;
        out["rows"] = out_rows;
        out["csv"] = format_sweep_csv(rows);
        return out;
      },
      py::arg("mmer"), py::arg("grid"), py::arg("scenario") = "both-new", py::arg("sc") = 0.3, py::arg("tc") = 0.3,
      py::arg("train_fraction") = 0.6, py::arg("reps") = 20, py::arg("seed") = 0, py::arg("workers") = 1);
}
