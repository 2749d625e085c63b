#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

// End-to-end checks of the semrob binary. The binary path and repo root
// come from the SEMROB_BIN / SEMROB_ROOT environment variables (set by
// ctest); the suite is skipped when they are absent.

namespace fs = std::filesystem;

namespace {

std::string bin() {
  const char* b = std::getenv("SEMROB_BIN");
  return b ? b : "";
}

fs::path root() {
  const char* r = std::getenv("SEMROB_ROOT");
  return r ? fs::path(r) : fs::current_path();
}

int run(const std::string& args, const std::string& out_file = "/dev/null") {
  const std::string cmd = bin() + " " + args + " > " + out_file + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::vector<std::string> body_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "semrob_cli_test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("expand matches the frozen golden sample") {
  REQUIRE_FALSE(bin().empty());
  TempDir tmp;
  const fs::path rules = root() / "data" / "rules";
  std::vector<std::string> produced;
  for (const std::string pack : {"shallow_negation", "mixed_sentiment", "sarcasm"}) {
    const fs::path out = tmp.path / (pack + ".tsv");
    REQUIRE(run("expand --templates " + (rules / (pack + ".tsv")).string() + " --lexicons " +
                (rules / "lexicons.txt").string() + " --out " + out.string() +
                " --sample 3 --seed 7 --provenance") == 0);
    for (auto& line : body_lines(out)) produced.push_back(std::move(line));
  }
  const auto golden = body_lines(root() / "tests" / "data" / "golden_expand_sample.tsv");
  CHECK(golden == produced);
}

TEST_CASE("expand fails cleanly on malformed template files") {
  REQUIRE_FALSE(bin().empty());
  TempDir tmp;
  const fs::path bad = tmp.path / "bad.tsv";
  std::ofstream(bad) << "broken @X@ line\tpositive\n";
  const fs::path log = tmp.path / "log.txt";
  CHECK(run("expand --templates " + bad.string() + " --lexicons " +
            (root() / "data" / "rules" / "lexicons.txt").string() + " --out " +
            (tmp.path / "out.tsv").string(),
            log.string()) == 1);
  const std::string message = slurp(log);
  CHECK(message.find("MalformedTemplate") != std::string::npos);
  CHECK(message.find("bad.tsv:1") != std::string::npos);  // line number surfaced
}

TEST_CASE("train / certify / assess / report pipeline produces the documented artifacts") {
  REQUIRE_FALSE(bin().empty());
  TempDir tmp;
  const fs::path rules = root() / "data" / "rules";
  const std::string emb = (root() / "data" / "embeddings" / "demo50.txt").string();
  const std::string corpus = (tmp.path / "corpus.tsv").string();
  const std::string rule = (tmp.path / "rule.tsv").string();

  REQUIRE(run("expand --templates " + (rules / "base_sentiment.tsv").string() + " --lexicons " +
              (rules / "lexicons.txt").string() + " --out " + corpus + " --sample 30 --seed 3") ==
          0);
  REQUIRE(run("expand --templates " + (rules / "shallow_negation.tsv").string() +
              " --lexicons " + (rules / "lexicons.txt").string() + " --out " + rule +
              " --sample 10 --seed 4 --provenance") == 0);

  const std::string model = (tmp.path / "m.bin").string();
  REQUIRE(run("train --corpus " + corpus + " --embeddings " + emb + " --out-model " + model +
              " --population 2 --epochs 3 --seed 9") == 0);
  CHECK(fs::exists(tmp.path / "m.0.bin"));

  // augmented training writes the mixed corpus with its provenance column
  const std::string aug = (tmp.path / "aug.tsv").string();
  REQUIRE(run("train --corpus " + corpus + " --embeddings " + emb + " --out-model " +
              (tmp.path / "ma.bin").string() + " --epochs 1 --augment " + rule +
              " --factor 2 --save-augmented " + aug) == 0);
  {
    const auto rows = body_lines(aug);
    CHECK(rows.size() == 30 * 12 + 2 * 8 * 10);  // base + factor x rule
    std::size_t tagged = 0;
    for (const auto& r : rows) {
      if (r.find("\trule:shallow_negation") != std::string::npos) ++tagged;
    }
    CHECK(tagged == 2 * 8 * 10);
  }
  CHECK(fs::exists(tmp.path / "m.1.bin"));
  CHECK(fs::exists(tmp.path / "m.0.bin.log"));
  {
    const auto log_lines = body_lines(tmp.path / "m.0.bin.log");
    REQUIRE(log_lines.size() == 4);  // header row + 3 epochs
    CHECK(log_lines[0] == "epoch\tloss\ttrain_acc");
  }

  const std::string cert = (tmp.path / "cert.tsv").string();
  REQUIRE(run("certify --model " + (tmp.path / "m.0.bin").string() + " --corpus " + rule +
              " --embeddings " + emb + " --epsilon 0 --out " + cert) == 0);
  {
    const auto rows = body_lines(cert);
    REQUIRE(rows.size() == 81);  // header + one row per sample (8 templates x 10)
    CHECK(rows[0] == "sample_id\tepsilon\tverdict\tmargin\tnote");
    // epsilon 0: every correctly classified sample is certified
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const bool certified = rows[i].find("\tcertified\t") != std::string::npos;
      const bool misclassified = rows[i].find("misclassified") != std::string::npos;
      CHECK((certified || misclassified));
    }
  }

  const std::string discrete = (tmp.path / "disc.tsv").string();
  REQUIRE(run("certify --model " + (tmp.path / "m.0.bin").string() + " --corpus " + rule +
              " --embeddings " + emb + " --epsilon 0.4 --mode discrete --out " + discrete) == 0);
  CHECK(body_lines(discrete).size() == 81);
  // discrete mode rejects non-Linf norms
  CHECK(run("certify --model " + (tmp.path / "m.0.bin").string() + " --corpus " + rule +
            " --embeddings " + emb + " --epsilon 0.4 --mode discrete --norm 2 --out " +
            (tmp.path / "x.tsv").string()) == 1);

  const std::string assess_prefix = (tmp.path / "van").string();
  REQUIRE(run("assess --model " + (tmp.path / "m.0.bin").string() + " --model " +
              (tmp.path / "m.1.bin").string() + " --base " + corpus + " --rule " + rule +
              " --embeddings " + emb + " --tau 0.05 --out " + assess_prefix) == 0);
  CHECK(fs::exists(assess_prefix + ".json"));
  CHECK(fs::exists(assess_prefix + ".txt"));
  {
    const std::string json_text = slurp(assess_prefix + ".json");
    CHECK(json_text.find("\"phenomenon\": \"shallow_negation\"") != std::string::npos);
    CHECK(json_text.find("\"p\"") != std::string::npos);
    CHECK(json_text.find("\"p_prime\"") != std::string::npos);
    CHECK(json_text.find("\"semantic_robust\"") != std::string::npos);
  }

  const std::string table = (tmp.path / "table.txt").string();
  const std::string plot = (tmp.path / "plot.tsv").string();
  REQUIRE(run("report " + assess_prefix + ".json " + assess_prefix + ".json " +
              assess_prefix + ".json --out " + table + " --plot " + plot) == 0);
  {
    const auto plot_rows = body_lines(plot);
    REQUIRE(plot_rows.size() == 4);  // header + one row per report
    CHECK(plot_rows[0] == "epsilon\tmean_accuracy\tmean_param_norm");
  }
  CHECK(slurp(table).find("base_accuracy") != std::string::npos);
}

TEST_CASE("assess accepts external prediction files and validates ids") {
  REQUIRE_FALSE(bin().empty());
  TempDir tmp;
  const fs::path rules = root() / "data" / "rules";
  const std::string corpus = (tmp.path / "c.tsv").string();
  REQUIRE(run("expand --templates " + (rules / "base_sentiment.tsv").string() + " --lexicons " +
              (rules / "lexicons.txt").string() + " --out " + corpus + " --sample 5 --seed 2") ==
          0);
  const auto lines = body_lines(corpus);

  // perfect predictions for base, all-wrong for the rule set
  const std::string good = (tmp.path / "good.tsv").string();
  const std::string wrong = (tmp.path / "wrong.tsv").string();
  {
    std::ofstream g(good);
    std::ofstream w(wrong);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string label = lines[i].substr(0, lines[i].find('\t'));
      g << i << "\t" << label << "\n";
      w << i << "\t" << (label == "positive" ? "negative" : "positive") << "\n";
    }
  }
  const std::string prefix = (tmp.path / "ext").string();
  REQUIRE(run("assess --base-preds " + good + " --rule-preds " + wrong + " --base " + corpus +
              " --rule " + corpus + " --tau 0.05 --out " + prefix) == 0);
  const std::string json_text = slurp(prefix + ".json");
  CHECK(json_text.find("\"p\": 1.0") != std::string::npos);
  CHECK(json_text.find("\"p_prime\": 0.0") != std::string::npos);
  CHECK(json_text.find("\"semantic_robust\": false") != std::string::npos);

  // truncated predictions: id coverage mismatch
  const std::string part = (tmp.path / "part.tsv").string();
  {
    std::ofstream p(part);
    p << "0\tpositive\n";
  }
  const fs::path log = tmp.path / "err.txt";
  CHECK(run("assess --base-preds " + part + " --rule-preds " + wrong + " --base " + corpus +
            " --rule " + corpus + " --tau 0.05 --out " + (tmp.path / "bad").string(),
            log.string()) == 1);
  CHECK(slurp(log).find("IdMismatch") != std::string::npos);
}

TEST_CASE("inspect reports the demo table diameter near the expected magnitude") {
  REQUIRE_FALSE(bin().empty());
  TempDir tmp;
  const fs::path log = tmp.path / "out.txt";
  REQUIRE(run("inspect --embeddings " +
              (root() / "data" / "embeddings" / "demo50.txt").string() + " --diameter",
              log.string()) == 0);
  const std::string text = slurp(log);
  CHECK(text.find("dim 50") != std::string::npos);
  const std::size_t pos = text.find("L2 diameter: ");
  REQUIRE(pos != std::string::npos);
  const double d = std::stod(text.substr(pos + 13));
  CHECK(d > 0.3);   // the reference tables this mimics sit around 3.2
  CHECK(d < 32.0);
}

TEST_CASE("report renders a single population without stars") {
  REQUIRE_FALSE(bin().empty());
  TempDir tmp;
  const fs::path rules = root() / "data" / "rules";
  const std::string emb = (root() / "data" / "embeddings" / "demo50.txt").string();
  const std::string corpus = (tmp.path / "c.tsv").string();
  REQUIRE(run("expand --templates " + (rules / "base_sentiment.tsv").string() + " --lexicons " +
              (rules / "lexicons.txt").string() + " --out " + corpus + " --sample 8 --seed 6") ==
          0);
  REQUIRE(run("train --corpus " + corpus + " --embeddings " + emb + " --out-model " +
              (tmp.path / "m.bin").string() + " --population 2 --epochs 1 --seed 1") == 0);
  const std::string prefix = (tmp.path / "solo").string();
  REQUIRE(run("assess --model " + (tmp.path / "m.0.bin").string() + " --model " +
              (tmp.path / "m.1.bin").string() + " --base " + corpus + " --rule " + corpus +
              " --embeddings " + emb + " --out " + prefix) == 0);
  const std::string table = (tmp.path / "solo_table.txt").string();
  REQUIRE(run("report " + prefix + ".json --out " + table) == 0);
  const std::string rendered = slurp(table);
  CHECK(rendered.find("base_accuracy") != std::string::npos);
  CHECK(rendered.find('*') == std::string::npos);
}

TEST_CASE("SEMROBE_SEED overrides the default seed") {
  REQUIRE_FALSE(bin().empty());
  TempDir tmp;
  const fs::path rules = root() / "data" / "rules";
  const std::string base_cmd = "expand --templates " +
                               (rules / "sarcasm.tsv").string() + " --lexicons " +
                               (rules / "lexicons.txt").string() + " --sample 4 --out ";
  const std::string a = (tmp.path / "a.tsv").string();
  const std::string b = (tmp.path / "b.tsv").string();
  const std::string c = (tmp.path / "c.tsv").string();
  REQUIRE(std::system((std::string("SEMROBE_SEED=555 ") + bin() + " " + base_cmd + a +
                       " > /dev/null 2>&1")
                          .c_str()) == 0);
  REQUIRE(std::system((std::string("SEMROBE_SEED=555 ") + bin() + " " + base_cmd + b +
                       " > /dev/null 2>&1")
                          .c_str()) == 0);
  REQUIRE(std::system((std::string("SEMROBE_SEED=777 ") + bin() + " " + base_cmd + c +
                       " > /dev/null 2>&1")
                          .c_str()) == 0);
  CHECK(body_lines(a) == body_lines(b));
  CHECK(body_lines(a) != body_lines(c));
  // the seed lands in the config header
  CHECK(slurp(a).find("seed=555") != std::string::npos);
}

TEST_CASE("missing input paths exit nonzero with a clean message") {
  REQUIRE_FALSE(bin().empty());
  TempDir tmp;
  const fs::path log = tmp.path / "log.txt";
  CHECK(run("train --corpus /nonexistent.tsv --embeddings /nonexistent.txt --out-model " +
            (tmp.path / "m.bin").string(),
            log.string()) == 1);
  CHECK(slurp(log).find("error:") != std::string::npos);
}
