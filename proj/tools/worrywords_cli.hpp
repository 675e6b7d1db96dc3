// Copyright 2026 The worrywords-engine Authors
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

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "worrywords/worrywords.hpp"

namespace worrywords::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

/// "-" is standard output.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      os_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Error("cannot write '" + path + "'");
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }
  void close() {
    os_->flush();
    if (!*os_) throw Error("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

inline void write_comment_header(std::ostream& os, const json& config) {
  os << "# worrywords " << kVersion << '\n' << "# config: " << config.dump() << '\n';
}

inline json envelope(const json& config) {
  return {{"tool", "worrywords"}, {"version", kVersion}, {"config", config}};
}

/// `[NAME=]PATH[@COLUMN]`; COLUMN is a 0-based index or a header name.
struct ResourceSpec {
  std::string name;
  std::string path;
  std::string column;
};

inline ResourceSpec parse_resource(const std::string& arg) {
  ResourceSpec r;
  std::string rest = arg;
  if (const auto eq = rest.find('='); eq != std::string::npos) {
    r.name = rest.substr(0, eq);
    rest = rest.substr(eq + 1);
  }
  if (const auto at = rest.rfind('@'); at != std::string::npos) {
    r.column = rest.substr(at + 1);
    rest = rest.substr(0, at);
  }
  r.path = rest;
  if (r.path.empty()) throw ValidationError("resource '" + arg + "' has no path");
  if (r.name.empty()) r.name = r.column.empty() ? fs::path(r.path).stem().string() : r.column;
  return r;
}

inline ScoreTable load_resource(const ResourceSpec& r) {
  auto in = open_in(r.path);
  if (r.column.empty()) return load_score_table(in, r.name);
  const bool numeric = r.column.find_first_not_of("0123456789") == std::string::npos;
  if (numeric) return load_score_table(in, r.name, std::stoul(r.column));
  return load_score_table(in, r.name, 1, r.column);
}

inline Lexicon load_lexicon_file(const std::string& path) {
  auto in = open_in(path);
  return load_lexicon(in, fs::path(path).stem().string());
}

inline arcs::TextStream load_stream(const std::string& path) {
  auto in = open_in(path);
  return arcs::read_stream_jsonl(in, fs::path(path).stem().string());
}

inline std::vector<ResponseRecord> load_responses(const std::string& path) {
  auto in = open_in(path);
  auto rs = read_responses_csv(in);
  if (rs.empty()) throw ValidationError("no responses in '" + path + "'");
  return rs;
}

inline GoldSet load_golds(const std::string& path) {
  GoldSet g;
  if (path.empty()) return g;
  auto in = open_in(path);
  for (auto& item : read_golds_csv(in)) g.add(item);
  return g;
}

inline json resource_json(const std::vector<std::string>& specs) {
  json a = json::array();
  for (const auto& s : specs) {
    const auto r = parse_resource(s);
    a.push_back({{"name", r.name}, {"path", r.path}, {"column", r.column}});
  }
  return a;
}

inline arcs::BinSpec make_binspec(std::size_t k, std::size_t s, const std::string& period) {
  if (!period.empty()) return arcs::BinSpec::time(timeutil::parse_duration(period));
  return arcs::BinSpec::count(k, s);
}

inline json arc_json(const std::string& name, const arcs::Arc& arc) {
  json pts = json::array();
  for (const auto& p : arc.points) {
    json start = arc.mode == arcs::BinMode::time ? json(timeutil::format_rfc3339(p.start))
                                                 : json(p.start);
    pts.push_back({{"bin_start", start}, {"score", p.score}, {"coverage", p.coverage}});
  }
  json empty = json::array();
  for (auto s : arc.empty_bins)
    empty.push_back(arc.mode == arcs::BinMode::time ? json(timeutil::format_rfc3339(s)) : json(s));
  return {{"name", name}, {"points", std::move(pts)}, {"empty_bins", std::move(empty)}};
}

struct Options {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string output = "-";
  std::string format;

  // aggregate / reliability
  std::string responses, golds, summary, annotators;
  double threshold = 0.80;
  int tolerance = 1;
  bool include_gold = false;
  std::size_t trials = 1000;
  std::vector<std::size_t> schemes = {10, 7, 5, 4, 3, 2};
  std::vector<double> thresholds;
  bool no_correlations = false;
  std::size_t mc_trials = 0;
  std::size_t mc_terms = 1000;

  // arcs
  std::string stream, suite, corpus, period;
  std::vector<std::string> streams;
  std::vector<std::string> lexicons;
  std::size_t k = 50, s = 1;
  std::vector<std::size_t> ks = {1, 10, 50, 100, 200, 500, 1000};
  bool gold = false;

  // sampler
  std::string out_dir;
  sampler::SamplerConfig sampler;

  // analysis
  std::vector<std::string> long_format;
  std::string method = "spearman";
  std::string scatter;
  std::string anxiety = "anxiety", valence = "valence", arousal = "arousal", dominance = "dominance";
  double midpoint = 0.5;
  std::string lexicon, aoa;
  bool shares = false;
};

// ---------------------------------------------------------------------------

inline int cmd_aggregate(const Options& o, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  cfg.gold_accuracy_threshold = o.threshold;
  cfg.gold_tolerance = o.tolerance;
  cfg.exclude_gold_from_aggregation = !o.include_gold;
  cfg.validate();
  const json config = {{"subcommand", "aggregate"},     {"responses", o.responses},
                       {"golds", o.golds},              {"gold_accuracy_threshold", o.threshold},
                       {"gold_tolerance", o.tolerance}, {"exclude_gold", !o.include_gold}};
  const auto responses = load_responses(o.responses);
  const auto golds = load_golds(o.golds);
  const auto result = run_pipeline(responses, golds, cfg, "anxiety");
  Sink lex(o.output, out);
  write_comment_header(*lex, config);
  save_lexicon(*lex, result.aggregation.lexicon);
  lex.close();
  if (!o.summary.empty()) {
    Sink sum(o.summary, out);
    json j = envelope(config);
    j["summary"] = to_json(result.aggregation.summary);
    *sum << j.dump(2) << '\n';
    sum.close();
  }
  if (!o.annotators.empty()) {
    Sink ann(o.annotators, out);
    json j = envelope(config);
    json list = json::array();
    for (const auto& a : result.qc.annotators) list.push_back(to_json(a));
    j["annotators"] = std::move(list);
    *ann << j.dump(2) << '\n';
    ann.close();
  }
  const auto& s = result.aggregation.summary;
  err << "aggregate: " << s.n_terms << " terms, " << s.n_annotators_kept << " annotators kept, "
      << s.n_annotators_discarded << " discarded\n";
  return 0;
}

inline int cmd_reliability(const Options& o, std::ostream& out, std::ostream&) {
  reliability::ReliabilityConfig cfg;
  cfg.n_trials = o.trials;
  cfg.seed = o.seed;
  cfg.schemes = o.schemes;
  cfg.thresholds = o.thresholds;
  cfg.with_correlations = !o.no_correlations;
  cfg.jobs = o.jobs;
  const json config = {{"subcommand", "reliability"}, {"responses", o.responses},
                       {"golds", o.golds},            {"gold_accuracy_threshold", o.threshold},
                       {"gold_tolerance", o.tolerance},
                       {"n_trials", o.trials},        {"seed", o.seed},
                       {"schemes", o.schemes},        {"thresholds", o.thresholds},
                       {"correlations", !o.no_correlations},
                       {"mc_trials", o.mc_trials},    {"mc_terms", o.mc_terms}};
  auto responses = load_responses(o.responses);
  if (!o.golds.empty()) {
    PipelineConfig pc;
    pc.gold_accuracy_threshold = o.threshold;
    pc.gold_tolerance = o.tolerance;
    pc.validate();
    const auto golds = load_golds(o.golds);
    auto qc = qc_filter(responses, golds, pc);
    responses.clear();
    for (auto& r : qc.kept)
      if (!golds.find(r.term)) responses.push_back(std::move(r));
  }
  const auto grouped = reliability::group_by_term(responses);
  const auto rep = reliability::run_split_half(grouped, cfg);
  std::vector<double> mc(rep.rows.size(), 0.0);
  if (o.mc_trials > 0) {
    parallel_for(rep.rows.size(), o.jobs, [&](std::size_t i) {
      mc[i] = reliability::random_baseline_shcmp_mc(ClassScheme(rep.rows[i].n_bins), o.mc_trials,
                                                    o.mc_terms, derive_seed(o.seed, (std::size_t{1} << 20) + i));
    });
  }
  Sink sink(o.output, out);
  if (o.format == "csv") {
    write_comment_header(*sink, config);
    *sink << "n_bins,bin_width,random_shcmp" << (o.mc_trials ? ",random_shcmp_mc" : "")
          << ",shcmp,shclosep\n";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const auto& r = rep.rows[i];
      *sink << r.n_bins << ',' << detail::format_double(r.bin_width) << ','
            << detail::format_double(r.random_shcmp);
      if (o.mc_trials) *sink << ',' << detail::format_double(mc[i]);
      *sink << ',' << detail::format_double(r.shcmp) << ',' << detail::format_double(r.shclosep)
            << '\n';
    }
  } else {
    json j = envelope(config);
    json body = reliability::to_json(rep);
    if (o.mc_trials)
      for (std::size_t i = 0; i < rep.rows.size(); ++i) body["rows"][i]["random_shcmp_mc"] = mc[i];
    j["report"] = std::move(body);
    *sink << j.dump(2) << '\n';
  }
  sink.close();
  return 0;
}

inline int cmd_arc(const Options& o, std::ostream& out, std::ostream&) {
  const auto spec = make_binspec(o.k, o.s, o.period);
  json config = {{"subcommand", "arc"}, {"stream", o.stream}, {"lexicons", resource_json(o.lexicons)},
                 {"binspec", arcs::to_json(spec)}, {"gold", o.gold}};
  const std::size_t n_arcs = o.lexicons.size() + (o.gold ? 1 : 0);
  if (n_arcs == 0) throw ValidationError("nothing to compute: pass --lexicon or --gold");
  if (o.format != "json" && n_arcs != 1)
    throw ValidationError("csv output holds one arc; use --format json for several");
  const auto stream = load_stream(o.stream);
  if (stream.posts.empty()) throw ValidationError("stream '" + o.stream + "' is empty");
  std::vector<std::pair<std::string, arcs::Arc>> out_arcs;
  for (const auto& spec_str : o.lexicons) {
    const auto r = parse_resource(spec_str);
    out_arcs.emplace_back(r.name, arcs::predicted_arc(stream, load_resource(r), spec));
  }
  std::optional<arcs::Arc> gold;
  if (o.gold) gold = arcs::gold_arc(stream, spec);
  Sink sink(o.output, out);
  if (o.format != "json") {
    write_comment_header(*sink, config);
    arcs::write_arc_csv(*sink, gold ? *gold : out_arcs.front().second);
  } else {
    json j = envelope(config);
    json list = json::array();
    for (const auto& [name, arc] : out_arcs) list.push_back(arc_json(name, arc));
    j["arcs"] = std::move(list);
    if (gold) {
      j["gold"] = arc_json("gold", *gold);
      json reports = json::array();
      for (const auto& [name, arc] : out_arcs) {
        json r = {{"lexicon", name}};
        try {
          r["report"] = arcs::to_json(arcs::evaluate(arc, *gold, spec));
        } catch (const Error& e) {
          r["error"] = e.what();
        }
        reports.push_back(std::move(r));
      }
      j["reports"] = std::move(reports);
    }
    *sink << j.dump(2) << '\n';
  }
  sink.close();
  return 0;
}

inline json sampler_json(const sampler::SamplerConfig& c) { return sampler::to_json(c); }

inline int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
  auto cfg = o.sampler;
  cfg.master_seed = o.seed;
  cfg.validate();
  const json config = {{"subcommand", "sample"}, {"corpus", o.corpus}, {"sampler", sampler_json(cfg)}};
  const auto corpus = sampler::LabeledCorpus::from_stream(load_stream(o.corpus));
  fs::create_directories(o.out_dir);
  std::vector<json> entries(cfg.n_streams);
  parallel_for(cfg.n_streams, o.jobs, [&](std::size_t i) {
    const auto g = sampler::generate_suite_stream(corpus, cfg, i);
    const auto path = fs::path(o.out_dir) / (g.stream.id + ".jsonl");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path.string() + "'");
    arcs::write_stream_jsonl(f, g.stream);
    f.flush();
    if (!f) throw Error("write failed for '" + path.string() + "'");
    entries[i] = sampler::manifest_entry(g);
  });
  json manifest = envelope(config);
  manifest["streams"] = entries;
  Sink m((fs::path(o.out_dir) / "manifest.json").string(), out);
  *m << manifest.dump(2) << '\n';
  m.close();
  err << "sample: wrote " << cfg.n_streams << " streams to " << o.out_dir << '\n';
  return 0;
}

/// Stream paths of a suite directory: manifest order if present, else sorted.
inline std::vector<std::string> suite_paths(const std::string& dir) {
  std::vector<std::string> out;
  const auto manifest = fs::path(dir) / "manifest.json";
  if (fs::exists(manifest)) {
    auto in = open_in(manifest.string());
    const auto j = nlohmann::json::parse(in);
    for (const auto& s : j.at("streams"))
      out.push_back((fs::path(dir) / (s.at("id").get<std::string>() + ".jsonl")).string());
    return out;
  }
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".jsonl") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

inline int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.lexicons.empty()) throw ValidationError("evaluate needs at least one --lexicon");
  std::vector<arcs::BinSpec> specs;
  if (!o.period.empty()) {
    specs.push_back(make_binspec(0, 0, o.period));
  } else {
    if (o.ks.empty()) throw ValidationError("no bin sizes given");
    for (auto k : o.ks) specs.push_back(arcs::BinSpec::count(k, o.s));
  }
  json spec_list = json::array();
  for (const auto& sp : specs) spec_list.push_back(arcs::to_json(sp));
  json config = {{"subcommand", "evaluate"}, {"lexicons", resource_json(o.lexicons)},
                 {"binspecs", spec_list}};

  std::vector<std::string> paths = o.streams;
  auto sampler_cfg = o.sampler;
  sampler_cfg.master_seed = o.seed;
  const bool generate = !o.corpus.empty();
  if (!o.suite.empty()) {
    auto more = suite_paths(o.suite);
    paths.insert(paths.end(), more.begin(), more.end());
  }
  if (generate) {
    if (!paths.empty()) throw ValidationError("use either --corpus or stream files, not both");
    sampler_cfg.validate();
    config["corpus"] = o.corpus;
    config["sampler"] = sampler_json(sampler_cfg);
  } else {
    if (paths.empty()) throw ValidationError("no streams: pass --stream, --suite or --corpus");
    config["streams"] = paths;
  }

  std::vector<ScoreTable> lexicons;
  for (const auto& spec_str : o.lexicons) lexicons.push_back(load_resource(parse_resource(spec_str)));
  std::optional<sampler::LabeledCorpus> corpus;
  if (generate) corpus = sampler::LabeledCorpus::from_stream(load_stream(o.corpus));
  const std::size_t n_streams = generate ? sampler_cfg.n_streams : paths.size();

  // reports[lexicon][spec][stream]
  using Slot = std::optional<arcs::EvaluationReport>;
  std::vector<std::vector<std::vector<Slot>>> reports(
      lexicons.size(), std::vector<std::vector<Slot>>(specs.size(), std::vector<Slot>(n_streams)));
  parallel_for(n_streams, o.jobs, [&](std::size_t i) {
    const arcs::TextStream stream = generate
                                        ? sampler::generate_suite_stream(*corpus, sampler_cfg, i).stream
                                        : load_stream(paths[i]);
    for (std::size_t b = 0; b < specs.size(); ++b) {
      std::optional<arcs::Arc> gold;
      try {
        gold = arcs::gold_arc(stream, specs[b]);
      } catch (const ValidationError&) {
        continue;
      }
      for (std::size_t l = 0; l < lexicons.size(); ++l) {
        try {
          reports[l][b][i] =
              arcs::evaluate(arcs::predicted_arc(stream, lexicons[l], specs[b]), *gold, specs[b]);
        } catch (const DegenerateError&) {
        } catch (const ValidationError&) {
        }
      }
    }
  });

  Sink sink(o.output, out);
  if (o.format == "json") {
    json j = envelope(config);
    json rows = json::array();
    for (std::size_t l = 0; l < lexicons.size(); ++l)
      for (std::size_t b = 0; b < specs.size(); ++b) {
        const auto s = arcs::summarize(reports[l][b], specs[b]);
        rows.push_back({{"lexicon", lexicons[l].name()},
                        {"binspec", arcs::to_json(specs[b])},
                        {"n_streams", s.n_streams},
                        {"n_failed", s.n_failed},
                        {"mean_spearman", s.mean_spearman},
                        {"mean_pearson", s.mean_pearson},
                        {"mean_rmse", s.mean_rmse},
                        {"mean_rmse_raw", s.mean_rmse_raw}});
      }
    j["rows"] = std::move(rows);
    *sink << j.dump(2) << '\n';
  } else {
    write_comment_header(*sink, config);
    *sink << "lexicon,k,s,period_seconds,n_streams,n_failed,mean_spearman,mean_pearson,mean_rmse,"
             "mean_rmse_raw\n";
    for (std::size_t l = 0; l < lexicons.size(); ++l)
      for (std::size_t b = 0; b < specs.size(); ++b) {
        const auto s = arcs::summarize(reports[l][b], specs[b]);
        const auto& sp = specs[b];
        *sink << csv::quote(lexicons[l].name()) << ',';
        if (sp.mode == arcs::BinMode::time)
          *sink << ",," << sp.period;
        else
          *sink << sp.k << ',' << sp.s << ',';
        *sink << ',' << s.n_streams << ',' << s.n_failed << ','
              << detail::format_double(s.mean_spearman) << ','
              << detail::format_double(s.mean_pearson) << ',' << detail::format_double(s.mean_rmse)
              << ',' << detail::format_double(s.mean_rmse_raw) << '\n';
      }
  }
  sink.close();
  err << "evaluate: " << n_streams << " streams, " << specs.size() << " bin settings, "
      << lexicons.size() << " lexicons\n";
  return 0;
}

inline int cmd_correlate(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.method != "spearman" && o.method != "pearson")
    throw ValidationError("method must be spearman or pearson");
  json config = {{"subcommand", "correlate"}, {"resources", resource_json(o.lexicons)},
                 {"long_format", o.long_format}, {"method", o.method}};
  std::vector<ScoreTable> resources;
  for (const auto& s : o.lexicons) resources.push_back(load_resource(parse_resource(s)));
  for (const auto& path : o.long_format) {
    auto in = open_in(path);
    for (auto& [emotion, table] : analysis::load_long_format(in)) resources.push_back(std::move(table));
  }
  const auto join = analysis::join_lexicons(resources);
  const auto m = analysis::correlation_matrix(
      join, o.method == "pearson" ? analysis::Method::pearson : analysis::Method::spearman);
  Sink sink(o.output, out);
  if (o.format == "json") {
    json j = envelope(config);
    j["n_joined"] = join.rows.size();
    j["names"] = m.names;
    j["matrix"] = m.values;
    *sink << j.dump(2) << '\n';
  } else {
    write_comment_header(*sink, config);
    *sink << "# n_joined: " << join.rows.size() << '\n' << "resource";
    for (const auto& n : m.names) *sink << ',' << csv::quote(n);
    *sink << '\n';
    for (std::size_t i = 0; i < m.names.size(); ++i) {
      *sink << csv::quote(m.names[i]);
      for (double v : m.values[i]) *sink << ',' << detail::format_double(v);
      *sink << '\n';
    }
  }
  sink.close();
  if (!o.scatter.empty()) {
    analysis::AffectOptions opt;
    opt.anxiety = o.anxiety;
    opt.valence = o.valence;
    opt.arousal = o.arousal;
    opt.dominance = o.dominance;
    opt.midpoint = o.midpoint;
    const auto space = analysis::affect_space_points(join, opt);
    json sc = config;
    sc["scatter"] = {{"anxiety", o.anxiety}, {"valence", o.valence}, {"arousal", o.arousal},
                     {"dominance", o.dominance}, {"midpoint", o.midpoint}};
    Sink pts(o.scatter, out);
    write_comment_header(*pts, sc);
    for (std::size_t q = 0; q < 4; ++q) {
      const auto quad = static_cast<analysis::Quadrant>(q);
      *pts << "# count " << analysis::quadrant_label(quad, 'v', 'a');
      for (auto c : {analysis::AffectClass::anxious, analysis::AffectClass::neutral,
                     analysis::AffectClass::calm})
        *pts << ' ' << analysis::affect_class_label(c) << '=' << space.va_count(quad, c);
      *pts << " |" << ' ' << analysis::quadrant_label(quad, 'v', 'd');
      for (auto c : {analysis::AffectClass::anxious, analysis::AffectClass::neutral,
                     analysis::AffectClass::calm})
        *pts << ' ' << analysis::affect_class_label(c) << '=' << space.vd_count(quad, c);
      *pts << '\n';
    }
    *pts << "term,v,a,d,anxiety,quadrant_va,quadrant_vd\n";
    for (const auto& p : space.points)
      *pts << csv::quote(p.term) << ',' << detail::format_double(p.v) << ','
           << detail::format_double(p.a) << ',' << detail::format_double(p.d) << ','
           << detail::format_double(p.anxiety) << ',' << analysis::quadrant_label(p.va, 'v', 'a')
           << ',' << analysis::quadrant_label(p.vd, 'v', 'd') << '\n';
    pts.close();
  }
  err << "correlate: " << join.rows.size() << " shared terms over " << resources.size()
      << " resources\n";
  return 0;
}

inline int cmd_aoa(const Options& o, std::ostream& out, std::ostream& err) {
  const json config = {{"subcommand", "aoa"}, {"lexicon", o.lexicon}, {"aoa", o.aoa},
                       {"table", o.shares ? "class_shares" : "distribution"}};
  const auto lex = load_lexicon_file(o.lexicon);
  auto in = open_in(o.aoa);
  std::size_t skipped = 0;
  const auto records = analysis::read_aoa_csv(in, &skipped);
  Sink sink(o.output, out);
  write_comment_header(*sink, config);
  *sink << "age,class,percentage\n";
  if (o.shares) {
    for (const auto& row : analysis::aoa_class_shares(lex, records))
      for (std::size_t i = 0; i < analysis::kNonNeutralClasses.size(); ++i)
        *sink << row.age << ',' << class_label(analysis::kNonNeutralClasses[i]) << ','
              << detail::format_double(row.shares[i]) << '\n';
  } else {
    const auto d = analysis::aoa_distribution(lex, records);
    for (const auto& c : d.cells)
      *sink << c.age << ',' << class_label(c.cls) << ',' << detail::format_double(c.percentage)
            << '\n';
  }
  sink.close();
  err << "aoa: " << records.size() << " norms read, " << skipped << " rows without an age\n";
  return 0;
}

inline int cmd_classdist(const Options& o, std::ostream& out, std::ostream&) {
  const json config = {{"subcommand", "classdist"}, {"lexicon", o.lexicon}};
  const auto d = class_distribution(load_lexicon_file(o.lexicon));
  Sink sink(o.output, out);
  if (o.format == "json") {
    json j = envelope(config);
    json classes = json::array();
    for (std::size_t i = 0; i < 7; ++i)
      classes.push_back({{"class", class_label(kAllClasses[i])},
                         {"count", d.counts[i]},
                         {"percentage", d.percentages[i]}});
    j["n_terms"] = d.total;
    j["classes"] = std::move(classes);
    j["anxiety_percentage"] = d.anxiety_percentage();
    j["calmness_percentage"] = d.calmness_percentage();
    *sink << j.dump(2) << '\n';
  } else {
    write_comment_header(*sink, config);
    *sink << "class,count,percentage\n";
    for (std::size_t i = 0; i < 7; ++i)
      *sink << class_label(kAllClasses[i]) << ',' << d.counts[i] << ','
            << detail::format_double(d.percentages[i]) << '\n';
  }
  sink.close();
  return 0;
}

// ---------------------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"WorryWords: word-anxiety lexicon tools", "worrywords"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.add_option("--seed", o.seed, "Master seed for every random draw")->capture_default_str();
  app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", o.output, "Output path, - for stdout")->capture_default_str();
  };
  auto add_format = [&](CLI::App* sub, const std::string& def) {
    o.format = def;
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
  };
  auto add_qc = [&](CLI::App* sub) {
    sub->add_option("--threshold", o.threshold, "Minimum gold accuracy")->capture_default_str();
    sub->add_option("--tolerance", o.tolerance, "Allowed gold rating distance")->capture_default_str();
  };
  auto add_sampler = [&](CLI::App* sub) {
    sub->add_option("--n-streams", o.sampler.n_streams)->capture_default_str();
    sub->add_option("--length", o.sampler.total_length, "Posts per stream")->capture_default_str();
    sub->add_option("--burst-min", o.sampler.burst_min)->capture_default_str();
    sub->add_option("--burst-max", o.sampler.burst_max)->capture_default_str();
    sub->add_option("--slope-min", o.sampler.slope_min)->capture_default_str();
    sub->add_option("--slope-max", o.sampler.slope_max)->capture_default_str();
    sub->add_option("--mixing", o.sampler.mixing, "bernoulli or exact")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, sampler::Mixing>{{"bernoulli", sampler::Mixing::bernoulli},
                                                   {"exact", sampler::Mixing::exact}}));
  };

  auto* agg = app.add_subcommand("aggregate", "Quality-filter responses and build the lexicon");
  agg->add_option("--responses", o.responses, "term,annotator_id,rating CSV")->required();
  agg->add_option("--golds", o.golds, "term,expected,popup CSV");
  add_qc(agg);
  agg->add_flag("--include-gold", o.include_gold, "Keep gold items in the lexicon");
  agg->add_option("--summary", o.summary, "Write the summary JSON here");
  agg->add_option("--annotators", o.annotators, "Write per-annotator QC JSON here");
  add_output(agg);

  auto* rel = app.add_subcommand("reliability", "Split-half reliability report");
  rel->add_option("--responses", o.responses)->required();
  rel->add_option("--golds", o.golds, "Apply gold QC first");
  add_qc(rel);
  rel->add_option("--trials", o.trials)->check(CLI::PositiveNumber)->capture_default_str();
  rel->add_option("--schemes", o.schemes, "Bin counts")->delimiter(',')->capture_default_str();
  rel->add_option("--closeness", o.thresholds, "Extra closeness thresholds")->delimiter(',');
  rel->add_flag("--no-correlations", o.no_correlations);
  rel->add_option("--mc-trials", o.mc_trials, "Monte-Carlo random baseline trials")
      ->capture_default_str();
  rel->add_option("--mc-terms", o.mc_terms)->check(CLI::PositiveNumber)->capture_default_str();
  add_format(rel, "json");
  add_output(rel);

  auto* arc = app.add_subcommand("arc", "Predicted and gold arcs for one stream");
  arc->add_option("--stream", o.stream, "JSON-lines stream")->required();
  arc->add_option("--lexicon", o.lexicons, "[NAME=]PATH[@COLUMN]");
  arc->add_flag("--gold", o.gold, "Also compute the gold arc");
  arc->add_option("-k,--k", o.k, "Posts per bin")->capture_default_str();
  arc->add_option("-s,--s", o.s, "Step between bins")->capture_default_str();
  arc->add_option("--period", o.period, "Time bins, e.g. 1d or 6h");
  add_format(arc, "csv");
  add_output(arc);

  auto* smp = app.add_subcommand("sample", "Generate a suite of synthetic streams");
  smp->add_option("--corpus", o.corpus, "JSON-lines posts labeled 0 or 1")->required();
  smp->add_option("--out-dir", o.out_dir)->required();
  add_sampler(smp);

  auto* ev = app.add_subcommand("evaluate", "Mean arc agreement over many streams");
  ev->add_option("--lexicon", o.lexicons, "[NAME=]PATH[@COLUMN]")->required();
  ev->add_option("--stream", o.streams, "JSON-lines stream");
  ev->add_option("--suite", o.suite, "Directory written by sample");
  ev->add_option("--corpus", o.corpus, "Generate the suite from this corpus instead");
  add_sampler(ev);
  ev->add_option("-k,--k", o.ks, "Bin sizes")->delimiter(',')->capture_default_str();
  ev->add_option("-s,--s", o.s)->capture_default_str();
  ev->add_option("--period", o.period);
  add_format(ev, "csv");
  add_output(ev);

  auto* cor = app.add_subcommand("correlate", "Correlation matrix over shared terms");
  cor->add_option("--lexicon", o.lexicons, "[NAME=]PATH[@COLUMN]");
  cor->add_option("--long", o.long_format, "term<TAB>emotion<TAB>score file");
  cor->add_option("--method", o.method)->capture_default_str();
  cor->add_option("--scatter", o.scatter, "Write affect-space points here");
  cor->add_option("--anxiety", o.anxiety)->capture_default_str();
  cor->add_option("--valence", o.valence)->capture_default_str();
  cor->add_option("--arousal", o.arousal)->capture_default_str();
  cor->add_option("--dominance", o.dominance)->capture_default_str();
  cor->add_option("--midpoint", o.midpoint, "Quadrant split")->capture_default_str();
  add_format(cor, "csv");
  add_output(cor);

  auto* aoa = app.add_subcommand("aoa", "Lexicon classes by age of acquisition");
  aoa->add_option("--lexicon", o.lexicon)->required();
  aoa->add_option("--aoa", o.aoa, "term,aoa_years CSV")->required();
  aoa->add_flag("--shares", o.shares, "Per-age shares of the six non-neutral classes");
  add_output(aoa);

  auto* cd = app.add_subcommand("classdist", "Terms per 7-point class");
  cd->add_option("--lexicon", o.lexicon)->required();
  add_format(cd, "csv");
  add_output(cd);

  // per-subcommand default applied after parsing
  o.format.clear();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (o.format.empty()) o.format = (name == "reliability") ? "json" : "csv";
  try {
    if (name == "aggregate") return cmd_aggregate(o, out, err);
    if (name == "reliability") return cmd_reliability(o, out, err);
    if (name == "arc") return cmd_arc(o, out, err);
    if (name == "sample") return cmd_sample(o, out, err);
    if (name == "evaluate") return cmd_evaluate(o, out, err);
    if (name == "correlate") return cmd_correlate(o, out, err);
    if (name == "aoa") return cmd_aoa(o, out, err);
    if (name == "classdist") return cmd_classdist(o, out, err);
  } catch (const std::exception& e) {
    err << "worrywords " << name << ": " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace worrywords::cli
