// Command-line front end: expand | train | certify | assess | report |
// inspect. Every run echoes its full configuration (including the seed) as
// '#' header lines into each artifact it writes, so a rerun with the same
// flags reproduces the outputs byte for byte in single-job mode.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "semrob/datasets.hpp"
#include "semrob/embedding.hpp"
#include "semrob/ibp.hpp"
#include "semrob/kernels.hpp"
#include "semrob/model.hpp"
#include "semrob/robustness.hpp"
#include "semrob/template_engine.hpp"

using json = nlohmann::ordered_json;
using namespace semrob;

namespace {

constexpr std::uint64_t kDefaultSeed = 12345;

std::uint64_t env_seed_or(std::uint64_t fallback) {
  if (const char* env = std::getenv("SEMROBE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string("SEMROBE_SEED is not an integer: ") + env);
    }
  }
  return fallback;
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << std::fixed << v;
  return s.str();
}

// Sorted key=value header echoed into every artifact.
struct ConfigEcho {
  std::string command;
  std::map<std::string, std::string> entries;

  void set(const std::string& key, const std::string& value) { entries[key] = value; }
  void set(const std::string& key, std::uint64_t value) { entries[key] = std::to_string(value); }
  void set(const std::string& key, double value) { entries[key] = fmt(value); }

  std::vector<std::string> lines() const {
    std::vector<std::string> out;
    out.push_back("semrob " + command);
    for (const auto& [k, v] : entries) out.push_back(k + "=" + v);
    return out;
  }

  json to_json() const {
    json j;
    j["command"] = command;
    for (const auto& [k, v] : entries) j[k] = v;
    return j;
  }
};

std::ofstream open_out(const std::string& path, const ConfigEcho& echo) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  for (const auto& line : echo.lines()) out << "# " << line << "\n";
  return out;
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

// Phenomenon tag of a rule corpus: sample provenance "rule:<name>" when
// present, the file stem otherwise.
std::string phenomenon_of(const Corpus& corpus, const std::string& path) {
  for (const auto& s : corpus.samples) {
    if (s.source.rfind("rule:", 0) == 0) return s.source.substr(5);
  }
  return stem_of(path);
}

std::vector<SampleT<float>> embed_corpus(const Corpus& corpus, const EmbeddingTable& table,
                                         std::size_t length) {
  std::vector<SampleT<float>> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus.samples) {
    out.push_back({embed_text(table, s.words, length).matrix, s.label});
  }
  return out;
}

// Loads a corpus, surfacing skipped malformed lines on stderr.
Corpus load_corpus_reported(const std::string& path) {
  CorpusLoadReport report;
  Corpus corpus = load_corpus(path, &report);
  for (const auto& line : report.malformed) {
    std::cerr << "warning: skipped malformed line " << line << "\n";
  }
  return corpus;
}

double model_accuracy(const Classifier& net, const std::vector<SampleT<float>>& data,
                      bool parallel) {
  std::vector<char> hit(data.size(), 0);
  kernels::parallel_for(data.size(), parallel, [&](std::size_t i) {
    hit[i] = net.predict(data[i].x) == data[i].label ? 1 : 0;
  });
  std::size_t correct = 0;
  for (char h : hit) correct += h;
  return data.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(data.size());
}

// ---------------------------------------------------------------- expand --

struct ExpandArgs {
  std::vector<std::string> template_files;
  std::string lexicon_file;
  std::string out;
  std::uint64_t sample = 0;  // 0: exhaustive
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t cap = kDefaultExpansionCap;
  bool provenance = false;
};

int run_expand(const ExpandArgs& args) {
  const LexiconMap lexicons = parse_lexicons(args.lexicon_file);
  ConfigEcho echo;
  echo.command = "expand";
  std::string joined_templates;
  for (const auto& t : args.template_files) {
    if (!joined_templates.empty()) joined_templates += ",";
    joined_templates += t;
  }
  echo.set("templates", joined_templates);
  echo.set("lexicons", args.lexicon_file);
  echo.set("sample", args.sample);
  echo.set("seed", args.seed);
  echo.set("cap", args.cap);

  Corpus corpus;
  for (const auto& file : args.template_files) {
    for (const auto& t : load_template_file(file)) {
      const std::uint64_t count = count_expansions(t, lexicons);
      std::vector<LabeledText> expanded =
          args.sample == 0 ? expand_exhaustive(t, lexicons, args.cap)
                           : expand_sampled(t, lexicons, args.sample, args.seed);
      for (auto& e : expanded) {
        e.source = "rule:" + t.phenomenon;
        corpus.samples.push_back(std::move(e));
      }
      std::cout << t.id << "\t" << t.phenomenon << "\t" << count << " expansions";
      if (args.sample > 0) std::cout << ", sampled " << args.sample;
      std::cout << "\n";
    }
  }
  std::ofstream out = open_out(args.out, echo);
  for (const auto& s : corpus.samples) {
    out << label_name(s.label) << "\t";
    for (std::size_t i = 0; i < s.words.size(); ++i) {
      if (i) out << ' ';
      out << s.words[i];
    }
    if (args.provenance) out << "\t" << s.source;
    out << "\n";
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + args.out);
  std::cout << "wrote " << corpus.size() << " samples to " << args.out << "\n";
  return 0;
}

// ----------------------------------------------------------------- train --

struct TrainArgs {
  std::string corpus_file;
  std::string embeddings_file;
  std::string out_model;
  std::size_t length = 25;
  std::vector<std::size_t> hidden{32, 32};
  TrainConfig cfg;
  std::uint64_t seed = kDefaultSeed;
  int population = 1;
  double ibp_epsilon = -1.0;  // <0: vanilla
  double kappa = 0.5;
  int ramp_epochs = -1;
  std::string augment_file;
  std::size_t factor = 1;
  std::string save_augmented;
  std::string init_model;
  int jobs = 1;
};

std::string indexed_path(const std::string& path, int index, int population) {
  if (population <= 1) return path;
  const std::filesystem::path p(path);
  std::filesystem::path out = p.parent_path();
  out /= p.stem().string() + "." + std::to_string(index) + p.extension().string();
  return out.string();
}

int run_train(const TrainArgs& args) {
  const EmbeddingTable table = EmbeddingTable::load(args.embeddings_file);
  Corpus corpus = load_corpus(args.corpus_file);

  ConfigEcho echo;
  echo.command = "train";
  echo.set("corpus", args.corpus_file);
  echo.set("embeddings", args.embeddings_file);
  echo.set("length", static_cast<std::uint64_t>(args.length));
  {
    std::string h;
    for (std::size_t w : args.hidden) h += (h.empty() ? "" : ",") + std::to_string(w);
    echo.set("hidden", h);
  }
  echo.set("epochs", static_cast<std::uint64_t>(args.cfg.epochs));
  echo.set("batch_size", static_cast<std::uint64_t>(args.cfg.batch_size));
  echo.set("learning_rate", args.cfg.learning_rate);
  echo.set("momentum", args.cfg.momentum);
  echo.set("seed", args.seed);
  echo.set("population", static_cast<std::uint64_t>(args.population));

  if (!args.augment_file.empty()) {
    const Corpus rule = load_corpus(args.augment_file);
    AugmentSpec spec;
    spec.factor = args.factor;
    spec.shuffle_seed = args.seed;
    corpus = augment(corpus, rule, spec);
    echo.set("augment", args.augment_file);
    echo.set("factor", static_cast<std::uint64_t>(args.factor));
    if (!args.save_augmented.empty()) {
      save_corpus(corpus, args.save_augmented, true, echo.lines());
    }
    if (args.ibp_epsilon >= 0) {
      std::cerr << "warning: --ibp combined with --augment is untested territory\n";
    }
  }
  if (args.ibp_epsilon >= 0) {
    echo.set("ibp_epsilon", args.ibp_epsilon);
    echo.set("kappa", args.kappa);
    echo.set("ramp_epochs",
             static_cast<std::uint64_t>(args.ramp_epochs >= 0 ? args.ramp_epochs
                                                              : args.cfg.epochs / 2));
  }
  if (!args.init_model.empty()) echo.set("init_model", args.init_model);

  const auto data = embed_corpus(corpus, table, args.length);

  std::vector<Classifier> models(args.population);
  std::vector<TrainLog> logs(args.population);
  kernels::set_threads(args.jobs);
  kernels::parallel_for(static_cast<std::size_t>(args.population), args.jobs > 1,
                        [&](std::size_t m) {
    const std::uint64_t model_seed = args.seed + m;
    Classifier net = args.init_model.empty()
                         ? Classifier::init(args.length, table.dim(), args.hidden, kNumClasses,
                                            model_seed)
                         : load_model(indexed_path(args.init_model, static_cast<int>(m),
                                                   args.population));
    TrainConfig cfg = args.cfg;
    cfg.seed = model_seed;
    if (args.ibp_epsilon >= 0) {
      RobustTrainConfig rcfg;
      rcfg.epsilon_target = args.ibp_epsilon;
      rcfg.kappa = args.kappa;
      rcfg.ramp_epochs = args.ramp_epochs;
      rcfg.base = cfg;
      logs[m] = train_ibp(net, std::span<const SampleT<float>>(data), rcfg);
    } else {
      logs[m] = train(net, std::span<const SampleT<float>>(data), cfg);
    }
    models[m] = std::move(net);
  });

  for (int m = 0; m < args.population; ++m) {
    const std::string model_path = indexed_path(args.out_model, m, args.population);
    save_model(models[m], model_path);
    ConfigEcho model_echo = echo;
    model_echo.set("model_index", static_cast<std::uint64_t>(m));
    model_echo.set("model_seed", args.seed + m);
    save_train_log(logs[m], model_path + ".log", model_echo.lines());
    std::cout << model_path << "\tfinal_loss=" << fmt(logs[m].back().loss)
              << "\ttrain_acc=" << fmt(logs[m].back().accuracy) << "\n";
  }
  return 0;
}

// --------------------------------------------------------------- certify --

struct CertifyArgs {
  std::string model_file;
  std::string corpus_file;
  std::string embeddings_file;
  std::string out;
  double epsilon = 0.0;
  std::string mode = "continuous";
  std::string norm = "inf";
  std::uint64_t cap = SentenceEnumerator::kDefaultSentenceCap;
  std::uint64_t seed = kDefaultSeed;
  int jobs = 1;
};

int run_certify(const CertifyArgs& args) {
  const Classifier net = load_model(args.model_file);
  const EmbeddingTable table = EmbeddingTable::load(args.embeddings_file);
  const Corpus corpus = load_corpus(args.corpus_file);
  const Norm norm = parse_norm(args.norm);
  if (args.mode != "continuous" && args.mode != "discrete") {
    throw Error(ErrorCode::InvalidArgument, "--mode must be continuous or discrete");
  }
  if (args.mode == "continuous" && norm != Norm::linf) {
    throw Error(ErrorCode::NormNotSupported, "continuous certification supports Linf only");
  }

  ConfigEcho echo;
  echo.command = "certify";
  echo.set("model", args.model_file);
  echo.set("corpus", args.corpus_file);
  echo.set("embeddings", args.embeddings_file);
  echo.set("epsilon", args.epsilon);
  echo.set("mode", args.mode);
  echo.set("norm", args.norm);
  echo.set("seed", args.seed);

  struct Row {
    std::string verdict;
    std::string margin = "-";
    std::string note = "-";
    bool good = false;
  };
  std::vector<Row> rows(corpus.size());
  kernels::set_threads(args.jobs);
  kernels::parallel_for(corpus.size(), args.jobs > 1, [&](std::size_t i) {
    const auto& sample = corpus.samples[i];
    Row& row = rows[i];
    if (args.mode == "continuous") {
      const EmbeddedText x = embed_text(table, sample.words, net.seq_len());
      const CertResult res = certify_continuous<float>(net, x.flat(), args.epsilon,
                                                       sample.label);
      row.verdict = res.verdict == CertVerdict::certified ? "certified" : "unknown";
      row.margin = fmt(res.margin, 9);
      if (res.misclassified) row.note = "misclassified";
      row.good = res.verdict == CertVerdict::certified;
    } else {
      const BallSpec spec{args.epsilon, norm, BallScope::whole_sequence};
      const DiscreteCheckResult res =
          check_discrete_robustness(net, table, sample.words, spec, args.cap);
      row.verdict = res.robust ? "robust" : "broken";
      row.good = res.robust;
      const EmbeddedText x = embed_text(table, sample.words, net.seq_len());
      std::string note;
      if (net.predict(x.flat()) != sample.label) note = "misclassified";
      if (res.counterexample) {
        if (!note.empty()) note += ";";
        note += "counterexample:";
        for (const auto& w : *res.counterexample) note += " " + w;
      }
      if (!note.empty()) row.note = note;
    }
  });

  std::size_t good = 0;
  for (const auto& r : rows) good += r.good ? 1 : 0;
  ConfigEcho with_summary = echo;
  with_summary.set("summary", std::to_string(good) + "/" + std::to_string(rows.size()) + " " +
                                  (args.mode == "continuous" ? "certified" : "robust"));
  if (!table.injective()) {
    with_summary.set("warning", "embedding table is not injective (" +
                                    std::to_string(table.duplicate_groups().size()) +
                                    " duplicate vector groups)");
  }
  std::ofstream out = open_out(args.out, with_summary);
  out << "sample_id\tepsilon\tverdict\tmargin\tnote\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << i << "\t" << fmt(args.epsilon) << "\t" << rows[i].verdict << "\t" << rows[i].margin
        << "\t" << rows[i].note << "\n";
  }
  std::cout << args.mode << ": " << good << "/" << rows.size() << " "
            << (args.mode == "continuous" ? "certified" : "robust") << ", report in "
            << args.out << "\n";
  return 0;
}

// ---------------------------------------------------------------- assess --

struct AssessArgs {
  std::vector<std::string> model_files;
  std::string base_preds;
  std::vector<std::string> rule_preds;
  std::string base_corpus_file;
  std::vector<std::string> rule_corpus_files;
  std::string embeddings_file;
  std::string out_prefix;
  std::string name;
  double tau = kDefaultTau;
  double train_epsilon = 0.0;  // metadata for report plots
  std::size_t length = 0;      // 0: from model
  std::uint64_t seed = kDefaultSeed;
  int jobs = 1;
};

int run_assess(const AssessArgs& args) {
  const bool model_mode = !args.model_files.empty();
  if (model_mode == !args.base_preds.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "give either --model (repeatable) or --base-preds/--rule-preds");
  }
  const Corpus base = load_corpus(args.base_corpus_file);
  std::vector<Corpus> rules;
  std::vector<std::string> phenomena;
  for (const auto& f : args.rule_corpus_files) {
    rules.push_back(load_corpus(f));
    phenomena.push_back(phenomenon_of(rules.back(), f));
  }
  if (rules.empty()) throw Error(ErrorCode::InvalidArgument, "at least one --rule required");

  ConfigEcho echo;
  echo.command = "assess";
  echo.set("base", args.base_corpus_file);
  {
    std::string r;
    for (const auto& f : args.rule_corpus_files) r += (r.empty() ? "" : ",") + f;
    echo.set("rules", r);
  }
  echo.set("tau", args.tau);
  echo.set("train_epsilon", args.train_epsilon);
  echo.set("seed", args.seed);

  json report;
  std::string population_name = args.name.empty() ? stem_of(args.out_prefix) : args.name;

  std::vector<double> base_accs;
  std::vector<double> param_norms;
  std::vector<std::vector<double>> rule_accs(rules.size());

  if (model_mode) {
    std::string m;
    for (const auto& f : args.model_files) m += (m.empty() ? "" : ",") + f;
    echo.set("models", m);
    echo.set("embeddings", args.embeddings_file);
    const EmbeddingTable table = EmbeddingTable::load(args.embeddings_file);
    kernels::set_threads(args.jobs);
    // corpora are embedded once per sequence length, not once per model
    std::size_t embedded_length = 0;
    std::vector<SampleT<float>> base_data;
    std::vector<std::vector<SampleT<float>>> rule_data;
    for (const auto& model_file : args.model_files) {
      const Classifier net = load_model(model_file);
      const std::size_t length = args.length == 0 ? net.seq_len() : args.length;
      if (length != embedded_length) {
        embedded_length = length;
        base_data = embed_corpus(base, table, length);
        rule_data.clear();
        for (const auto& rule : rules) rule_data.push_back(embed_corpus(rule, table, length));
      }
      base_accs.push_back(model_accuracy(net, base_data, args.jobs > 1));
      param_norms.push_back(net.param_norm());
      for (std::size_t r = 0; r < rules.size(); ++r) {
        rule_accs[r].push_back(model_accuracy(net, rule_data[r], args.jobs > 1));
      }
    }
  } else {
    if (args.rule_preds.size() != rules.size()) {
      throw Error(ErrorCode::InvalidArgument,
                  "need one --rule-preds per --rule in the same order");
    }
    echo.set("base_preds", args.base_preds);
    const PredictionFile bp = load_predictions(args.base_preds);
    base_accs.push_back(accuracy_against(bp, base));
    for (std::size_t r = 0; r < rules.size(); ++r) {
      const PredictionFile rp = load_predictions(args.rule_preds[r]);
      rule_accs[r].push_back(accuracy_against(rp, rules[r]));
    }
  }

  report["config"] = echo.to_json();
  report["population"] = json{{"name", population_name},
                              {"models", base_accs.size()},
                              {"base_accuracy", base_accs},
                              {"param_norm", param_norms}};
  report["phenomena"] = json::array();

  std::ostringstream text;
  text << "population " << population_name << " (" << base_accs.size() << " model(s))\n";
  text << "base accuracy p = " << fmt(mean_of(base_accs), 4);
  if (base_accs.size() > 1) text << " +- " << fmt(stddev_of(base_accs), 4);
  text << " on " << base.size() << " samples\n\n";
  for (std::size_t r = 0; r < rules.size(); ++r) {
    PerformancePair pair;
    pair.p = mean_of(base_accs);
    pair.p_prime = mean_of(rule_accs[r]);
    pair.n_base = base.size();
    pair.n_rule = rules[r].size();
    const bool sem = semantic_robustness(pair, args.tau);
    const bool inv = bounded_invariance(pair, args.tau);
    json entry;
    entry["phenomenon"] = phenomena[r];
    entry["p"] = pair.p;
    entry["p_prime"] = pair.p_prime;
    entry["tau"] = args.tau;
    entry["n_base"] = pair.n_base;
    entry["n_rule"] = pair.n_rule;
    entry["semantic_robust"] = sem;
    entry["bounded_invariant"] = inv;
    entry["per_model_rule_accuracy"] = rule_accs[r];
    report["phenomena"].push_back(entry);
    text << phenomena[r] << ": p' = " << fmt(pair.p_prime, 4);
    if (rule_accs[r].size() > 1) text << " +- " << fmt(stddev_of(rule_accs[r]), 4);
    text << " on " << rules[r].size() << " samples; tau = " << fmt(args.tau, 4)
         << "; semantically robust: " << (sem ? "yes" : "no")
         << "; bounded invariant: " << (inv ? "yes" : "no") << "\n";
  }

  {
    std::ofstream out(args.out_prefix + ".json");
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + args.out_prefix + ".json");
    out << report.dump(2) << "\n";
  }
  {
    std::ofstream out = open_out(args.out_prefix + ".txt", echo);
    out << text.str();
  }
  std::cout << text.str();
  std::cout << "reports: " << args.out_prefix << ".json, " << args.out_prefix << ".txt\n";
  return 0;
}

// ---------------------------------------------------------------- report --

struct ReportArgs {
  std::vector<std::string> report_files;
  std::string out;
  std::string plot;
  std::size_t resamples = 10000;
  std::uint64_t seed = kDefaultSeed;
  double alpha = kSignificanceAlpha;
};

int run_report(const ReportArgs& args) {
  std::vector<Population> populations;
  struct PlotRow {
    double epsilon;
    double mean_acc;
    double mean_norm;
  };
  std::vector<PlotRow> plot_rows;
  for (const auto& file : args.report_files) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::IoError, "cannot open report " + file);
    json j = json::parse(in, nullptr, true, true);
    Population pop;
    pop.name = j["population"]["name"].get<std::string>();
    std::vector<double> base = j["population"]["base_accuracy"].get<std::vector<double>>();
    std::vector<double> norms = j["population"]["param_norm"].get<std::vector<double>>();
    pop.metrics.push_back({"base_accuracy", base});
    if (!norms.empty()) pop.metrics.push_back({"param_norm", norms});
    for (const auto& ph : j["phenomena"]) {
      pop.metrics.push_back({ph["phenomenon"].get<std::string>() + "_accuracy",
                             ph["per_model_rule_accuracy"].get<std::vector<double>>()});
    }
    populations.push_back(std::move(pop));
    double eps = 0.0;
    if (j["config"].contains("train_epsilon")) {
      eps = std::stod(j["config"]["train_epsilon"].get<std::string>());
    }
    plot_rows.push_back({eps, mean_of(base), norms.empty() ? 0.0 : mean_of(norms)});
  }

  ConfigEcho echo;
  echo.command = "report";
  {
    std::string r;
    for (const auto& f : args.report_files) r += (r.empty() ? "" : ",") + f;
    echo.set("reports", r);
  }
  echo.set("alpha", args.alpha);
  echo.set("resamples", static_cast<std::uint64_t>(args.resamples));
  echo.set("seed", args.seed);

  std::string rendered;
  if (populations.size() >= 2) {
    const PopulationTable table =
        compare_populations(populations, args.alpha, args.resamples, args.seed);
    rendered = render_population_table(table);
  } else {
    // single population: the table without stars
    std::ostringstream s;
    for (const auto& [metric, values] : populations.front().metrics) {
      s << metric << "  " << fmt(mean_of(values), 4) << " +- " << fmt(stddev_of(values), 4)
        << "\n";
    }
    rendered = s.str();
  }
  if (!args.out.empty()) {
    std::ofstream out = open_out(args.out, echo);
    out << rendered;
  }
  std::cout << rendered;

  if (!args.plot.empty()) {
    std::sort(plot_rows.begin(), plot_rows.end(),
              [](const PlotRow& a, const PlotRow& b) { return a.epsilon < b.epsilon; });
    std::ofstream out = open_out(args.plot, echo);
    out << "epsilon\tmean_accuracy\tmean_param_norm\n";
    for (const auto& row : plot_rows) {
      out << fmt(row.epsilon) << "\t" << fmt(row.mean_acc) << "\t" << fmt(row.mean_norm)
          << "\n";
    }
    std::cout << "plot data: " << args.plot << "\n";
  }
  return 0;
}

// --------------------------------------------------------------- inspect --

struct InspectArgs {
  std::string embeddings_file;
  bool show_diameter = false;
  std::string norm = "2";
  std::string neighbors_word;
  double epsilon = 0.0;
  std::string out;
  int jobs = 1;
};

int run_inspect(const InspectArgs& args) {
  const EmbeddingTable table = EmbeddingTable::load(args.embeddings_file);
  kernels::set_threads(args.jobs);
  const Norm norm = parse_norm(args.norm);
  std::cout << "table: " << table.size() << " words, dim " << table.dim() << "\n";
  if (!table.injective()) {
    std::cout << "warning: not injective, " << table.duplicate_groups().size()
              << " duplicate vector group(s)\n";
  }
  if (args.show_diameter) {
    const double d = diameter(table, norm, args.jobs > 1);
    std::cout << "L" << args.norm << " diameter: " << fmt(d, 2) << "\n";
  }
  if (!args.neighbors_word.empty()) {
    const BallSpec spec{args.epsilon, norm, BallScope::per_word};
    const auto neighbors = dball_neighbors(table, args.neighbors_word, spec, args.jobs > 1);
    ConfigEcho echo;
    echo.command = "inspect";
    echo.set("embeddings", args.embeddings_file);
    echo.set("word", args.neighbors_word);
    echo.set("epsilon", args.epsilon);
    echo.set("norm", args.norm);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!args.out.empty()) {
      file = open_out(args.out, echo);
      out = &file;
    }
    for (const auto& n : neighbors) {
      *out << args.neighbors_word << "\t" << table.word(n.index) << "\t" << fmt(n.distance)
           << "\n";
    }
    std::cout << neighbors.size() << " neighbor(s) within " << fmt(args.epsilon) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semantic robustness toolkit"};
  app.require_subcommand(1);

  ExpandArgs expand_args;
  auto* expand = app.add_subcommand("expand", "expand template packs into a labeled corpus");
  expand->add_option("--templates", expand_args.template_files, "template TSV file(s)")
      ->required();
  expand->add_option("--lexicons", expand_args.lexicon_file, "lexicon file")->required();
  expand->add_option("--out", expand_args.out, "output corpus TSV")->required();
  expand->add_option("--sample", expand_args.sample, "sample N expansions per template");
  expand->add_option("--seed", expand_args.seed, "sampling seed")
      ->default_val(env_seed_or(kDefaultSeed));
  expand->add_option("--cap", expand_args.cap, "exhaustive expansion cap");
  expand->add_flag("--provenance", expand_args.provenance, "write a provenance column");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "train classifiers (vanilla, IBP or augmented)");
  train_cmd->add_option("--corpus", train_args.corpus_file, "training corpus TSV")->required();
  train_cmd->add_option("--embeddings", train_args.embeddings_file, "embedding table")
      ->required();
  train_cmd->add_option("--out-model", train_args.out_model, "output model file")->required();
  train_cmd->add_option("--length", train_args.length, "sequence length");
  train_cmd->add_option("--hidden", train_args.hidden, "hidden layer widths");
  train_cmd->add_option("--epochs", train_args.cfg.epochs, "training epochs");
  train_cmd->add_option("--batch", train_args.cfg.batch_size, "mini-batch size");
  train_cmd->add_option("--lr", train_args.cfg.learning_rate, "learning rate");
  train_cmd->add_option("--momentum", train_args.cfg.momentum, "SGD momentum");
  train_cmd->add_option("--seed", train_args.seed, "base seed (model i uses seed+i)")
      ->default_val(env_seed_or(kDefaultSeed));
  train_cmd->add_option("--population", train_args.population, "train k seeded models");
  train_cmd->add_option("--ibp", train_args.ibp_epsilon, "robust training at Linf epsilon");
  train_cmd->add_option("--kappa", train_args.kappa, "nominal CE weight for IBP");
  train_cmd->add_option("--ramp-epochs", train_args.ramp_epochs, "epsilon ramp length");
  train_cmd->add_option("--augment", train_args.augment_file, "rule corpus to mix in");
  train_cmd->add_option("--factor", train_args.factor, "rule corpus replication factor");
  train_cmd->add_option("--save-augmented", train_args.save_augmented,
                        "write the mixed corpus (with provenance) to this path");
  train_cmd->add_option("--init-model", train_args.init_model,
                        "start from this model (fine-tuning)");
  train_cmd->add_option("--jobs", train_args.jobs, "parallelism across models");

  CertifyArgs certify_args;
  auto* certify = app.add_subcommand("certify", "per-sample robustness verdicts");
  certify->add_option("--model", certify_args.model_file, "model file")->required();
  certify->add_option("--corpus", certify_args.corpus_file, "corpus TSV")->required();
  certify->add_option("--embeddings", certify_args.embeddings_file, "embedding table")
      ->required();
  certify->add_option("--out", certify_args.out, "report TSV")->required();
  certify->add_option("--epsilon", certify_args.epsilon, "ball radius")->required();
  certify->add_option("--mode", certify_args.mode, "continuous | discrete");
  certify->add_option("--norm", certify_args.norm, "1 | 2 | inf (discrete mode)");
  certify->add_option("--cap", certify_args.cap, "enumeration cap");
  certify->add_option("--seed", certify_args.seed, "seed echoed into the report")
      ->default_val(env_seed_or(kDefaultSeed));
  certify->add_option("--jobs", certify_args.jobs, "parallelism across samples");

  AssessArgs assess_args;
  auto* assess = app.add_subcommand("assess", "semantic robustness report");
  assess->add_option("--model", assess_args.model_files, "model file(s)");
  assess->add_option("--base-preds", assess_args.base_preds, "external base predictions");
  assess->add_option("--rule-preds", assess_args.rule_preds, "external rule predictions");
  assess->add_option("--base", assess_args.base_corpus_file, "base test corpus")->required();
  assess->add_option("--rule", assess_args.rule_corpus_files, "rule corpus file(s)")
      ->required();
  assess->add_option("--embeddings", assess_args.embeddings_file,
                     "embedding table (model mode)");
  assess->add_option("--out", assess_args.out_prefix, "output prefix (.json/.txt)")->required();
  assess->add_option("--name", assess_args.name, "population name");
  assess->add_option("--tau", assess_args.tau, "robustness threshold");
  assess->add_option("--train-epsilon", assess_args.train_epsilon,
                     "epsilon metadata for plots");
  assess->add_option("--length", assess_args.length, "override sequence length");
  assess->add_option("--seed", assess_args.seed, "seed echoed into the report")
      ->default_val(env_seed_or(kDefaultSeed));
  assess->add_option("--jobs", assess_args.jobs, "parallelism across samples");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "compare assessment reports");
  report->add_option("reports", report_args.report_files, "assess .json files")->required();
  report->add_option("--out", report_args.out, "comparison table file");
  report->add_option("--plot", report_args.plot, "epsilon/accuracy/norm TSV");
  report->add_option("--resamples", report_args.resamples, "permutation resamples");
  report->add_option("--alpha", report_args.alpha, "significance level");
  report->add_option("--seed", report_args.seed, "permutation seed")
      ->default_val(env_seed_or(kDefaultSeed));

  InspectArgs inspect_args;
  auto* inspect = app.add_subcommand("inspect", "embedding table diagnostics");
  inspect->add_option("--embeddings", inspect_args.embeddings_file, "embedding table")
      ->required();
  inspect->add_flag("--diameter", inspect_args.show_diameter, "compute the exact diameter");
  inspect->add_option("--norm", inspect_args.norm, "1 | 2 | inf");
  inspect->add_option("--neighbors", inspect_args.neighbors_word, "dump neighbors of a word");
  inspect->add_option("--epsilon", inspect_args.epsilon, "neighbor radius");
  inspect->add_option("--out", inspect_args.out, "neighbor dump TSV");
  inspect->add_option("--jobs", inspect_args.jobs, "parallelism");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*expand) return run_expand(expand_args);
    if (*train_cmd) return run_train(train_args);
    if (*certify) return run_certify(certify_args);
    if (*assess) return run_assess(assess_args);
    if (*report) return run_report(report_args);
    if (*inspect) return run_inspect(inspect_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
