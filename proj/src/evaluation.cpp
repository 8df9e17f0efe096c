#include "cognate/evaluation.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <map>
#include <sstream>

#include "cognate/errors.hpp"
#include "cognate/text_io.hpp"

namespace cognate {

namespace {

std::vector<std::string> gold_fields(std::string_view line) {
  auto fields = text::split(line, '\t');
  if (fields.size() != 3) {
    fields.clear();
    for (auto token : text::split_whitespace(line)) fields.emplace_back(token);
  }
  for (auto& f : fields) f = std::string(text::trim(f));
  return fields;
}

}  // namespace

std::vector<GoldPair> parse_gold_pairs(std::istream& in, const LanguageTag& lang1,
                                       const LanguageTag& lang2) {
  std::vector<GoldPair> gold;
  std::map<std::pair<std::string, std::string>, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (text::read_line(in, line)) {
    ++line_no;
    const auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto fields = gold_fields(trimmed);
    if (first && fields.size() == 3 && fields[2] == "label") {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != 3) {
      throw InputError("line " + std::to_string(line_no) + ": expected word1, word2, label");
    }
    GoldPair pair{fields[0], fields[1], lang1, lang2, GoldLabel::true_cognate};
    if (fields[2] == "FF") {
      pair.label = GoldLabel::false_friend;
    } else if (fields[2] != "TC") {
      throw InputError("line " + std::to_string(line_no) + ": unknown label '" + fields[2] +
                       "' (expected FF or TC)");
    }
    const auto [it, inserted] = seen.emplace(std::make_pair(pair.word1, pair.word2), line_no);
    if (!inserted) {
      throw InputError("line " + std::to_string(line_no) + ": duplicate pair " + pair.word1 + "/" +
                       pair.word2 + " (first seen on line " + std::to_string(it->second) + ")");
    }
    gold.push_back(std::move(pair));
  }
  return gold;
}

std::vector<GoldPair> load_gold_pairs(const std::filesystem::path& path, const LanguageTag& lang1,
                                      const LanguageTag& lang2) {
  auto in = text::open_input(path, "gold");
  try {
    return parse_gold_pairs(in, lang1, lang2);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

SynsetTable parse_synset_table(std::istream& in) {
  SynsetTable table;
  std::string line;
  std::size_t line_no = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    const auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::set<SynsetMember> synset;
    for (auto token : text::split_whitespace(trimmed)) {
      const auto colon = token.find(':');
      if (colon == std::string_view::npos || colon == 0 || colon + 1 == token.size()) {
        throw InputError("line " + std::to_string(line_no) + ": malformed synset member '" +
                         std::string(token) + "' (expected lang:word)");
      }
      synset.emplace(LanguageTag{std::string(token.substr(0, colon))},
                     std::string(token.substr(colon + 1)));
    }
    table.synsets.push_back(std::move(synset));
  }
  return table;
}

SynsetTable load_synset_table(const std::filesystem::path& path) {
  auto in = text::open_input(path, "synset");
  try {
    return parse_synset_table(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

SynsetGold gold_from_synsets(const SynsetTable& table,
                             const std::vector<std::pair<std::string, std::string>>& pairs,
                             const LanguageTag& lang1, const LanguageTag& lang2) {
  std::map<SynsetMember, std::set<std::size_t>> memberships;
  for (std::size_t s = 0; s < table.synsets.size(); ++s) {
    for (const auto& member : table.synsets[s]) memberships[member].insert(s);
  }
  SynsetGold result;
  for (const auto& [w1, w2] : pairs) {
    const auto a = memberships.find({lang1, w1});
    const auto b = memberships.find({lang2, w2});
    if (a == memberships.end() || b == memberships.end()) {
      result.excluded.emplace_back(w1, w2);
      continue;
    }
    const bool shared = std::any_of(a->second.begin(), a->second.end(),
                                    [&](std::size_t s) { return b->second.contains(s); });
    result.labeled.push_back(
        {w1, w2, lang1, lang2, shared ? GoldLabel::true_cognate : GoldLabel::false_friend});
  }
  return result;
}

EvalResult metrics_from_counts(std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn,
                               std::size_t excluded) {
  EvalResult r;
  r.tp = tp;
  r.tn = tn;
  r.fp = fp;
  r.fn = fn;
  r.evaluated_count = tp + tn + fp + fn;
  r.excluded_count = excluded;
  if (r.evaluated_count > 0) {
    r.accuracy = static_cast<double>(tp + tn) / static_cast<double>(r.evaluated_count);
  }
  if (tp + fp > 0) r.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) r.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return r;
}

EvalResult evaluate(const std::vector<FalseFriendReport>& predictions,
                    const std::vector<GoldPair>& gold) {
  if (gold.empty()) throw InputError("gold standard is empty");
  std::map<std::pair<std::string, std::string>, GoldLabel> labels;
  for (const auto& g : gold) labels.emplace(std::make_pair(g.word1, g.word2), g.label);

  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  std::set<std::pair<std::string, std::string>> predicted;
  for (const auto& p : predictions) {
    const auto key = std::make_pair(p.word1, p.word2);
    const auto it = labels.find(key);
    if (it == labels.end()) {
      throw InputError("prediction/gold mismatch: " + p.word1 + "/" + p.word2 + " is not in the gold set");
    }
    if (!predicted.insert(key).second) {
      throw InputError("duplicate prediction for " + p.word1 + "/" + p.word2);
    }
    const bool gold_ff = it->second == GoldLabel::false_friend;
    if (p.is_false_friend) {
      gold_ff ? ++tp : ++fp;
    } else {
      gold_ff ? ++fn : ++tn;
    }
  }
  return metrics_from_counts(tp, tn, fp, fn, gold.size() - predicted.size());
}

std::string format_percent(std::optional<double> fraction) {
  if (!fraction) return "n/a";
  return text::fixed(*fraction * 100.0, 2);
}

std::string format_eval_table(const std::vector<std::pair<std::string, EvalResult>>& rows) {
  std::vector<std::array<std::string, 4>> cells;
  cells.push_back({"pair", "Accuracy", "Precision", "Recall"});
  for (const auto& [name, r] : rows) {
    cells.push_back({name, format_percent(r.accuracy), format_percent(r.precision),
                     format_percent(r.recall)});
  }
  std::array<std::size_t, 4> width{};
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < 4; ++c) {
      if (c == 0) {
        out << row[c] << std::string(width[c] - row[c].size(), ' ');
      } else {
        out << "  " << std::string(width[c] - row[c].size(), ' ') << row[c];
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace cognate
