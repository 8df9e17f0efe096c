#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cognate/alignment.hpp"
#include "cognate/cli.hpp"
#include "cognate/clustering.hpp"
#include "cognate/divergence.hpp"
#include "cognate/errors.hpp"
#include "cognate/evaluation.hpp"
#include "cognate/falsefriends.hpp"
#include "cognate/text_io.hpp"

namespace cognate::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <typename Fn>
auto with_language(const LanguageTag& lang, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const InputError& e) {
    throw InputError("[" + lang.code() + "] " + e.what());
  } catch (const NumericError& e) {
    throw NumericError("[" + lang.code() + "] " + e.what());
  }
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::string pair_name(const LanguageTag& a, const LanguageTag& b) { return a.code() + "-" + b.code(); }

std::vector<LanguageTag> selected_languages(const RunConfig& config) {
  if (!config.langs.empty()) return config.langs;
  std::vector<LanguageTag> all;
  for (const auto& [lang, source] : config.languages) all.push_back(lang);
  return all;
}

const LanguageTag& require_pivot(const RunConfig& config) {
  if (!config.pivot) throw InputError("no pivot language configured (use --pivot)");
  return *config.pivot;
}

const LanguageSource& source_for(const RunConfig& config, const LanguageTag& lang) {
  const auto it = config.languages.find(lang);
  if (it == config.languages.end()) {
    throw InputError("[" + lang.code() + "] language is not configured");
  }
  return it->second;
}

void require_file(const LanguageTag& lang, const fs::path& path, const std::string& what) {
  if (!fs::exists(path)) {
    throw InputError("[" + lang.code() + "] " + what + " file not found: " + path.string());
  }
}

// Checks every path a pipeline over `langs` will touch before any work starts.
void validate_sources(const RunConfig& config, const std::vector<LanguageTag>& langs) {
  const LanguageTag& pivot = require_pivot(config);
  bool needs_pivot_space = false;
  for (const auto& lang : langs) {
    const LanguageSource& src = source_for(config, lang);
    require_file(lang, src.embeddings, "embeddings");
    if (lang == pivot) {
      if (src.matrix || src.seeds) {
        throw InputError("[" + lang.code() + "] the pivot language takes the identity alignment");
      }
      continue;
    }
    if (src.matrix) {
      require_file(lang, *src.matrix, "alignment matrix");
    } else if (src.seeds) {
      require_file(lang, *src.seeds, "seed lexicon");
      needs_pivot_space = true;
    } else {
      throw InputError("[" + lang.code() + "] no alignment source (set \"seeds\" or \"matrix\")");
    }
  }
  if (needs_pivot_space) require_file(pivot, source_for(config, pivot).embeddings, "embeddings");
}

struct AlignmentInfo {
  std::string method;
  std::size_t seeds_used = 0;
  std::size_t seeds_dropped = 0;
};

// Loads spaces lazily and maps them into pivot coordinates.
class Pipeline {
 public:
  explicit Pipeline(const RunConfig& config) : config_(config), pivot_(require_pivot(config)) {}

  const LanguageTag& pivot() const { return pivot_; }

  const EmbeddingSpace& monolingual(const LanguageTag& lang) {
    if (auto it = monolingual_.find(lang); it != monolingual_.end()) return *it->second;
    auto space = with_language(lang, [&] {
      return normalize(load_embeddings(source_for(config_, lang).embeddings, lang, config_.limit));
    });
    return *monolingual_.emplace(lang, std::make_unique<EmbeddingSpace>(std::move(space)))
                .first->second;
  }

  AlignmentMap alignment(const LanguageTag& lang, AlignmentInfo* info = nullptr) {
    const auto& src = source_for(config_, lang);
    return with_language(lang, [&]() -> AlignmentMap {
      if (lang == pivot_) {
        if (info) info->method = "identity";
        return AlignmentMap::identity(lang, monolingual(lang).dim());
      }
      if (src.matrix) {
        if (info) info->method = "loaded";
        return load_alignment_matrix(*src.matrix, lang, pivot_);
      }
      if (!src.seeds) throw InputError("no alignment source (set \"seeds\" or \"matrix\")");
      const auto seeds = load_seed_lexicon(*src.seeds, lang, pivot_);
      AlignmentFit fit;
      auto map = learn_alignment(monolingual(lang), monolingual(pivot_), seeds, &fit);
      if (info) *info = {"learned", fit.used_pairs, fit.dropped_pairs};
      return map;
    });
  }

  const EmbeddingSpace& shared(const LanguageTag& lang) {
    if (auto it = shared_.find(lang); it != shared_.end()) return *it->second;
    const AlignmentMap map = alignment(lang);
    auto space = with_language(lang, [&] {
      if (map.target_language() != pivot_) throw InputError("alignment does not target the pivot");
      return normalize(apply_alignment(monolingual(lang), map));
    });
    return *shared_.emplace(lang, std::make_unique<EmbeddingSpace>(std::move(space))).first->second;
  }

  SpaceTable shared_table(const std::vector<LanguageTag>& langs) {
    SpaceTable table;
    for (const auto& lang : langs) table.emplace(lang, &shared(lang));
    return table;
  }

 private:
  const RunConfig& config_;
  LanguageTag pivot_;
  std::map<LanguageTag, std::unique_ptr<EmbeddingSpace>> monolingual_;
  std::map<LanguageTag, std::unique_ptr<EmbeddingSpace>> shared_;
};

std::vector<CognateSet> load_cognates(const RunConfig& config) {
  if (!config.cognates) throw InputError("no cognate file configured");
  return load_cognate_sets(*config.cognates, config.etymon_language);
}

std::pair<LanguageTag, LanguageTag> language_pair(const RunConfig& config) {
  if (config.langs.size() != 2) throw InputError("--langs must name exactly two languages, e.g. fr,es");
  if (config.langs[0] == config.langs[1]) throw InputError("--langs must name two distinct languages");
  return {config.langs[0], config.langs[1]};
}

json report_json(const ClassifiedReport& item) {
  const auto& r = item.report;
  json alternates = json::array();
  for (const auto& hit : r.alternates) {
    alternates.push_back({{"word", hit.word}, {"similarity", hit.similarity}, {"index", hit.index}});
  }
  return {{"lang1", r.lang1.code()},
          {"lang2", r.lang2.code()},
          {"word1", r.word1},
          {"word2", r.word2},
          {"is_false_friend", r.is_false_friend},
          {"correction", r.correction ? json(*r.correction) : json(nullptr)},
          {"falseness", r.falseness},
          {"cognate_similarity", r.cognate_similarity},
          {"best_similarity", r.best_similarity},
          {"class", std::string(to_string(item.falseness_class.kind))},
          {"threshold", item.falseness_class.threshold},
          {"alternates", alternates}};
}

json eval_json(const EvalResult& r) {
  auto optional_number = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"tp", r.tp},
          {"tn", r.tn},
          {"fp", r.fp},
          {"fn", r.fn},
          {"accuracy", r.accuracy},
          {"precision", optional_number(r.precision)},
          {"recall", optional_number(r.recall)},
          {"evaluated_count", r.evaluated_count},
          {"excluded_count", r.excluded_count}};
}

struct ParsedMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
};

ParsedMatrix read_similarity_csv(const fs::path& path) {
  auto in = text::open_input(path, "similarity matrix");
  std::string line;
  if (!text::read_line(in, line)) throw InputError(path.string() + ": empty similarity matrix");
  ParsedMatrix m;
  const auto header = text::split(line, ',');
  for (std::size_t i = 1; i < header.size(); ++i) m.labels.emplace_back(text::trim(header[i]));
  std::size_t line_no = 1;
  while (text::read_line(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto cells = text::split(line, ',');
    if (cells.size() != m.labels.size() + 1) {
      throw InputError(path.string() + ": line " + std::to_string(line_no) + ": wrong column count");
    }
    const std::size_t row = m.values.size();
    if (row >= m.labels.size() || text::trim(cells[0]) != m.labels[row]) {
      throw InputError(path.string() + ": line " + std::to_string(line_no) +
                       ": row label does not match the header order");
    }
    std::vector<double> values;
    for (std::size_t j = 1; j < cells.size(); ++j) {
      const auto cell = text::trim(cells[j]);
      double v = std::numeric_limits<double>::quiet_NaN();
      if (cell != "NA" && !text::parse_double(cell, v)) {
        throw InputError(path.string() + ": line " + std::to_string(line_no) + ": bad value '" +
                         std::string(cell) + "'");
      }
      values.push_back(v);
    }
    m.values.push_back(std::move(values));
  }
  if (m.values.size() != m.labels.size()) throw InputError(path.string() + ": matrix is not square");
  return m;
}

}  // namespace

int cmd_align(const RunConfig& config, std::ostream& log) {
  const auto langs = selected_languages(config);
  validate_sources(config, langs);
  Pipeline pipeline(config);
  const fs::path dir = config.out / "alignment";
  auto report = text::open_output(dir / "report.tsv");
  report << "language\tpivot\tmethod\tseeds_used\tseeds_dropped\torthogonality_residual\n";
  for (const auto& lang : langs) {
    if (lang == pipeline.pivot()) continue;
    AlignmentInfo info;
    const AlignmentMap map = pipeline.alignment(lang, &info);
    const fs::path file = dir / (pair_name(lang, pipeline.pivot()) + ".txt");
    auto out = text::open_output(file);
    write_alignment_matrix(map, out);
    const double residual = map.orthogonality_residual();
    report << lang.code() << '\t' << pipeline.pivot().code() << '\t' << info.method << '\t'
           << info.seeds_used << '\t' << info.seeds_dropped << '\t' << text::sig6(residual) << '\n';
    log << lang.code() << " -> " << pipeline.pivot().code() << ": " << info.method
        << ", orthogonality residual " << text::sig6(residual) << ", wrote " << file.string() << '\n';
  }
  return kSuccess;
}

int cmd_divergence(const RunConfig& config, std::ostream& log) {
  const auto langs = selected_languages(config);
  if (langs.size() < 2) throw InputError("divergence needs at least two languages");
  validate_sources(config, langs);
  const auto cognates = load_cognates(config);
  Pipeline pipeline(config);
  const SpaceTable spaces = pipeline.shared_table(langs);

  const fs::path dir = config.out / "divergence";
  const std::size_t n = langs.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> matrix(n, std::vector<double>(n, nan));
  std::vector<std::vector<std::string>> extremes(n, std::vector<std::string>(n, "--"));
  json pairs = json::array();
  json errors = json::array();

  for (std::size_t i = 0; i < n; ++i) {
    matrix[i][i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& a = langs[i];
      const auto& b = langs[j];
      LanguagePairSummary summary;
      try {
        summary = language_pair_divergence(cognates, a, b, spaces);
      } catch (const InputError& e) {
        errors.push_back({{"lang1", a.code()}, {"lang2", b.code()}, {"error", e.what()}});
        log << pair_name(a, b) << ": error: " << e.what() << '\n';
        extremes[i][j] = extremes[j][i] = "NA";
        continue;
      }
      matrix[i][j] = matrix[j][i] = summary.mean_similarity;

      auto scores = text::open_output(dir / "scores" / (pair_name(a, b) + ".csv"));
      scores << "lang1,lang2,word1,word2,similarity\n";
      for (const auto& s : summary.scores) {
        scores << s.lang1.code() << ',' << s.lang2.code() << ',' << csv_field(s.word1) << ','
               << csv_field(s.word2) << ',' << text::sig6(s.similarity) << '\n';
      }
      const auto [best, worst] = extreme_pairs(summary);
      extremes[i][j] = best.word1 + "/" + best.word2 + "(" + text::fixed(best.similarity, 2) + ")";
      extremes[j][i] = worst.word1 + "/" + worst.word2 + "(" + text::fixed(worst.similarity, 2) + ")";

      if (config.histogram) {
        const Histogram h = histogram(summary);
        auto hist = text::open_output(dir / "histograms" / (pair_name(a, b) + ".csv"));
        hist << "bin_lo,bin_hi,count\n";
        for (std::size_t k = 0; k < kHistogramBins; ++k) {
          hist << text::sig6(h.bin_edges[k]) << ',' << text::sig6(h.bin_edges[k + 1]) << ','
               << h.counts[k] << '\n';
        }
      }
      pairs.push_back({{"lang1", a.code()},
                       {"lang2", b.code()},
                       {"mean_similarity", summary.mean_similarity},
                       {"scored_count", summary.scored_count},
                       {"skipped_oov_count", summary.skipped_oov_count},
                       {"skipped_missing_count", summary.skipped_missing_count},
                       {"most_similar", {best.word1, best.word2, best.similarity}},
                       {"most_dissimilar", {worst.word1, worst.word2, worst.similarity}}});
      log << pair_name(a, b) << ": mean similarity " << text::fixed(summary.mean_similarity, 2)
          << " over " << summary.scored_count << " pairs (" << summary.skipped_oov_count
          << " out of vocabulary)\n";
    }
  }

  auto matrix_out = text::open_output(dir / "similarity_matrix.csv");
  auto extremes_out = text::open_output(dir / "extremes.csv");
  matrix_out << "language";
  extremes_out << "language";
  for (const auto& lang : langs) {
    matrix_out << ',' << lang.code();
    extremes_out << ',' << lang.code();
  }
  matrix_out << '\n';
  extremes_out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    matrix_out << langs[i].code();
    extremes_out << langs[i].code();
    for (std::size_t j = 0; j < n; ++j) {
      matrix_out << ',' << (std::isnan(matrix[i][j]) ? std::string("NA") : text::sig6(matrix[i][j]));
      extremes_out << ',' << csv_field(extremes[i][j]);
    }
    matrix_out << '\n';
    extremes_out << '\n';
  }

  json langs_json = json::array();
  for (const auto& lang : langs) langs_json.push_back(lang.code());
  json summary{{"pivot", pipeline.pivot().code()},
               {"seed", config.seed},
               {"languages", langs_json},
               {"cognate_sets", cognates.size()},
               {"pairs", pairs},
               {"errors", errors}};
  text::open_output(dir / "summary.json") << summary.dump(2) << '\n';
  return pairs.empty() ? kInputError : kSuccess;
}

int cmd_cluster(const RunConfig& config, std::ostream& log) {
  const fs::path input = config.similarity_matrix.value_or(config.out / "divergence" / "similarity_matrix.csv");
  const ParsedMatrix parsed = read_similarity_csv(input);
  const Dendrogram tree = upgma(to_distance(parsed.labels, parsed.values));
  const std::string newick = to_newick(*tree.root);

  const fs::path dir = config.out / "cluster";
  text::open_output(dir / "tree.nwk") << newick << '\n';
  auto merges = text::open_output(dir / "merges.csv");
  merges << "step,cluster_a,cluster_b,height\n";
  auto join = [](const std::vector<std::string>& labels) {
    std::string s;
    for (const auto& l : labels) s += (s.empty() ? "" : "+") + l;
    return s;
  };
  for (const auto& m : tree.merges) {
    merges << m.step << ',' << join(m.cluster_a) << ',' << join(m.cluster_b) << ','
           << text::sig6(m.height) << '\n';
  }
  log << newick << '\n';
  return kSuccess;
}

int cmd_falsefriends(const RunConfig& config, std::ostream& log) {
  const auto [lang1, lang2] = language_pair(config);
  validate_sources(config, {lang1, lang2});
  const auto cognates = load_cognates(config);
  Pipeline pipeline(config);
  const BatchResult batch =
      detect_batch(cognates, lang1, lang2, pipeline.shared_table({lang1, lang2}), config.threshold,
                   config.search_k);

  const fs::path dir = config.out / "falsefriends";
  auto tsv = text::open_output(dir / (pair_name(lang1, lang2) + ".tsv"));
  tsv << "word1\tword2\tis_false_friend\tcorrection\tfalseness\tclass\n";
  json rows = json::array();
  std::map<Falseness, std::size_t> counts;
  for (const auto& item : batch.reports) {
    const auto& r = item.report;
    tsv << r.word1 << '\t' << r.word2 << '\t' << (r.is_false_friend ? "true" : "false") << '\t'
        << r.correction.value_or("") << '\t' << text::sig6(r.falseness) << '\t'
        << to_string(item.falseness_class.kind) << '\n';
    rows.push_back(report_json(item));
    ++counts[item.falseness_class.kind];
  }
  json doc{{"lang1", lang1.code()},
           {"lang2", lang2.code()},
           {"threshold", config.threshold},
           {"seed", config.seed},
           {"skipped_oov", batch.skipped_oov},
           {"skipped_missing", batch.skipped_missing},
           {"reports", rows}};
  text::open_output(dir / (pair_name(lang1, lang2) + ".json")) << doc.dump(2) << '\n';

  log << pair_name(lang1, lang2) << ": " << batch.reports.size() << " pairs, "
      << counts[Falseness::hard] << " hard, " << counts[Falseness::soft] << " soft, "
      << counts[Falseness::true_cognate] << " true cognates, " << batch.skipped_oov
      << " skipped (out of vocabulary)\n";
  return kSuccess;
}

int cmd_evaluate(const RunConfig& config, std::ostream& log) {
  const auto [lang1, lang2] = language_pair(config);
  if (config.gold.has_value() == config.synsets.has_value()) {
    throw InputError("evaluate needs exactly one of --gold or --synsets");
  }
  validate_sources(config, {lang1, lang2});

  std::vector<GoldPair> gold;
  std::size_t not_in_synsets = 0;
  if (config.gold) {
    gold = load_gold_pairs(*config.gold, lang1, lang2);
  } else {
    const SynsetTable table = load_synset_table(*config.synsets);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& set : load_cognates(config)) {
      const auto w1 = set.form(lang1);
      const auto w2 = set.form(lang2);
      if (w1 && w2) pairs.emplace_back(*w1, *w2);
    }
    // Cognate lists may repeat a pair across sets; the gold set must not.
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    SynsetGold derived = gold_from_synsets(table, pairs, lang1, lang2);
    gold = std::move(derived.labeled);
    not_in_synsets = derived.excluded.size();
  }
  if (gold.empty()) throw InputError("gold standard is empty");

  Pipeline pipeline(config);
  const EmbeddingSpace& space1 = pipeline.shared(lang1);
  const EmbeddingSpace& space2 = pipeline.shared(lang2);
  std::vector<FalseFriendReport> predictions(gold.size());
  std::vector<char> predicted(gold.size(), 0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(gold.size()); ++i) {
    const auto& g = gold[static_cast<std::size_t>(i)];
    if (!space1.find(g.word1) || !space2.find(g.word2)) continue;
    predictions[static_cast<std::size_t>(i)] = detect(g.word1, g.word2, space1, space2, config.search_k);
    predicted[static_cast<std::size_t>(i)] = 1;
  }
  std::vector<FalseFriendReport> kept;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (predicted[i]) kept.push_back(std::move(predictions[i]));
  }
  const EvalResult result = evaluate(kept, gold);

  const std::string name = pair_name(lang1, lang2);
  json doc = eval_json(result);
  doc["pair"] = name;
  doc["gold_source"] = config.gold ? "curated" : "synsets";
  doc["excluded_not_in_synsets"] = not_in_synsets;
  const fs::path dir = config.out / "evaluation";
  text::open_output(dir / (name + ".json")) << doc.dump(2) << '\n';
  const std::string table = format_eval_table({{name, result}});
  text::open_output(dir / (name + ".txt")) << table;
  log << table;
  return kSuccess;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-lingual cognate divergence and false friend toolkit", "cognate"};
  app.require_subcommand(1);

  std::string config_path;
  std::string langs;
  std::optional<std::size_t> limit;
  std::optional<double> threshold;
  std::string pivot;
  std::string out_dir;
  bool histogram = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> search_k;
  std::string gold;
  std::string synsets;
  std::string matrix;

  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--langs", langs, "Comma-separated languages (e.g. fr,es)");
  app.add_option("--limit", limit, "Vocabulary rows to load per language")->check(CLI::PositiveNumber);
  app.add_option("--threshold", threshold, "Hard/soft falseness threshold")->check(CLI::PositiveNumber);
  app.add_option("--pivot", pivot, "Pivot language of the shared space");
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--histogram", histogram, "Write similarity histograms");
  app.add_option("--seed", seed, "Random seed recorded with the run");
  app.add_option("--search-k", search_k, "Neighbours kept per false friend report")->check(CLI::PositiveNumber);

  auto* align = app.add_subcommand("align", "Learn or load alignment matrices into the pivot space");
  auto* divergence = app.add_subcommand("divergence", "Score cognates and build the similarity matrix");
  auto* cluster = app.add_subcommand("cluster", "UPGMA dendrogram from a similarity matrix");
  cluster->add_option("--matrix", matrix, "Similarity matrix CSV (default: <out>/divergence/similarity_matrix.csv)");
  auto* falsefriends = app.add_subcommand("falsefriends", "Detect, grade and correct false friends");
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score false friend verdicts against a gold standard");
  evaluate_cmd->add_option("--gold", gold, "Curated TSV: word1, word2, FF|TC");
  evaluate_cmd->add_option("--synsets", synsets, "Synset file: one synset per line of lang:word tokens");
  for (auto* sub : {align, divergence, cluster, falsefriends, evaluate_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) config = load_config(config_path);
    if (!langs.empty()) config.langs = parse_language_list(langs);
    if (limit) config.limit = *limit;
    if (threshold) config.threshold = *threshold;
    if (!pivot.empty()) config.pivot = LanguageTag(pivot);
    if (!out_dir.empty()) config.out = out_dir;
    if (histogram) config.histogram = true;
    if (seed) config.seed = *seed;
    if (search_k) config.search_k = *search_k;
    if (!gold.empty()) config.gold = gold;
    if (!synsets.empty()) config.synsets = synsets;
    if (!matrix.empty()) config.similarity_matrix = matrix;

    if (align->parsed()) return cmd_align(config, out);
    if (divergence->parsed()) return cmd_divergence(config, out);
    if (cluster->parsed()) return cmd_cluster(config, out);
    if (falsefriends->parsed()) return cmd_falsefriends(config, out);
    return cmd_evaluate(config, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumericError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace cognate::cli
