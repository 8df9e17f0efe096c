#include "cognate/embedding_store.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iostream>
#include <sstream>

#include "cognate/errors.hpp"
#include "cognate/nn_kernels.hpp"
#include "cognate/text_io.hpp"

namespace cognate {

namespace {

bool warnings_enabled = true;

constexpr double kUnitNormTolerance = 1e-6;

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

char32_t lower_code_point(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  // Latin Extended-A alternates upper/lower, with the parity flipping
  // between U+0139..U+0148 and U+0179..U+017E.
  if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) {
    return (cp % 2 == 0 && cp != 0x130) ? cp + 1 : cp;
  }
  if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) {
    return cp % 2 == 1 ? cp + 1 : cp;
  }
  if (cp == 0x178) return 0xFF;
  // Romanian comma-below letters.
  if (cp >= 0x218 && cp <= 0x21B) return cp % 2 == 0 ? cp + 1 : cp;
  return cp;
}

}  // namespace

void warn(const std::string& message) {
  if (warnings_enabled) std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { warnings_enabled = enabled; }

LanguageTag::LanguageTag(std::string code) : code_(std::move(code)) {
  if (code_.empty()) throw InputError("language tag must be non-empty");
  for (char c : code_) {
    if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
          c == '_' || c == '-')) {
      throw InputError("language tag must be lowercase: '" + code_ + "'");
    }
  }
}

std::string fold_lowercase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    char32_t cp = lead;
    if (lead >= 0xC0 && lead < 0xE0) {
      len = 2;
      cp = lead & 0x1F;
    } else if (lead >= 0xE0 && lead < 0xF0) {
      len = 3;
      cp = lead & 0x0F;
    } else if (lead >= 0xF0 && lead < 0xF8) {
      len = 4;
      cp = lead & 0x07;
    }
    bool valid = len == 1 ? lead < 0x80 : i + len <= text.size();
    for (std::size_t j = 1; valid && j < len; ++j) {
      const auto cont = static_cast<unsigned char>(text[i + j]);
      if ((cont & 0xC0) != 0x80) valid = false;
      cp = (cp << 6) | (cont & 0x3F);
    }
    if (!valid) {
      // Pass malformed bytes through untouched.
      out += text[i];
      ++i;
      continue;
    }
    append_utf8(out, lower_code_point(cp));
    i += len;
  }
  return out;
}

EmbeddingSpace::EmbeddingSpace(LanguageTag language, std::vector<std::string> vocab,
                               RowMatrix vectors, bool normalized)
    : language_(std::move(language)),
      vocab_(std::move(vocab)),
      vectors_(std::move(vectors)),
      normalized_(normalized) {
  if (vectors_.cols() <= 0) throw InputError("embedding dimension must be positive");
  if (static_cast<std::size_t>(vectors_.rows()) != vocab_.size()) {
    throw InputError("vocabulary size does not match vector rows");
  }
  if (vocab_.empty()) throw InputError("empty vocabulary for language " + language_.code());
  if (!vectors_.allFinite()) throw InputError("non-finite embedding component");
  index_.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], i).second) {
      throw InputError("duplicate vocabulary entry: " + vocab_[i]);
    }
  }
}

std::span<const double> EmbeddingSpace::row(std::size_t index) const {
  return {vectors_.data() + index * dim(), dim()};
}

std::optional<std::size_t> EmbeddingSpace::find(std::string_view word) const {
  if (auto it = index_.find(std::string(word)); it != index_.end()) return it->second;
  if (auto it = index_.find(fold_lowercase(word)); it != index_.end()) return it->second;
  return std::nullopt;
}

EmbeddingSpace parse_embeddings(std::istream& in, const LanguageTag& language,
                                std::optional<std::size_t> limit, LoadStats* stats) {
  if (limit && *limit == 0) throw InputError("vocabulary limit must be positive");
  std::string line;
  std::size_t line_no = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    if (!text::trim(line).empty()) break;
  }
  const auto header = text::split_whitespace(line);
  std::size_t count = 0;
  double dim_value = 0;
  if (header.size() != 2 || !text::parse_size(header[0], count) ||
      !text::parse_double(header[1], dim_value) || dim_value != std::floor(dim_value)) {
    throw InputError("malformed embedding header at line " + std::to_string(line_no) +
                     ": expected \"count dim\"");
  }
  if (dim_value <= 0) throw InputError("embedding dimension must be positive");
  const auto dim = static_cast<std::size_t>(dim_value);
  const std::size_t wanted = limit ? std::min(count, *limit) : count;

  std::vector<std::string> vocab;
  std::vector<double> values;
  vocab.reserve(std::min<std::size_t>(wanted, 1 << 20));
  values.reserve(std::min<std::size_t>(wanted, 1 << 20) * dim);
  std::unordered_map<std::string, std::size_t> seen;
  std::size_t duplicates = 0;
  std::size_t blank_tokens = 0;

  while (vocab.size() < wanted && text::read_line(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto tokens = text::split_whitespace(line);
    if (std::isspace(static_cast<unsigned char>(line.front()))) {
      // Token consisting only of whitespace; the format cannot represent it.
      ++blank_tokens;
      continue;
    }
    if (tokens.size() != dim + 1) {
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                       " components, found " + std::to_string(tokens.size() - 1));
    }
    std::string token(tokens[0]);
    if (seen.contains(token)) {
      ++duplicates;
      continue;
    }
    const std::size_t offset = values.size();
    values.resize(offset + dim);
    for (std::size_t j = 0; j < dim; ++j) {
      double v = 0;
      if (!text::parse_double(tokens[j + 1], v) || !std::isfinite(v)) {
        throw InputError("line " + std::to_string(line_no) + ": invalid component '" +
                         std::string(tokens[j + 1]) + "'");
      }
      values[offset + j] = v;
    }
    seen.emplace(token, vocab.size());
    vocab.push_back(std::move(token));
  }

  if (vocab.empty()) throw InputError("empty vocabulary after parsing");
  if (duplicates > 0) {
    warn(language.code() + ": dropped " + std::to_string(duplicates) + " duplicate tokens");
  }
  if (blank_tokens > 0) {
    warn(language.code() + ": skipped " + std::to_string(blank_tokens) + " rows with blank tokens");
  }
  if (vocab.size() < wanted) {
    warn(language.code() + ": header declares " + std::to_string(count) + " rows, read " +
         std::to_string(vocab.size()));
  }
  if (stats) {
    stats->declared_count = count;
    stats->duplicates_dropped = duplicates;
  }
  RowMatrix matrix = Eigen::Map<RowMatrix>(values.data(), static_cast<Eigen::Index>(vocab.size()),
                                           static_cast<Eigen::Index>(dim));
  return EmbeddingSpace(language, std::move(vocab), std::move(matrix), false);
}

EmbeddingSpace load_embeddings(const std::filesystem::path& path, const LanguageTag& language,
                               std::optional<std::size_t> limit, LoadStats* stats) {
  auto in = text::open_input(path, "embedding");
  try {
    return parse_embeddings(in, language, limit, stats);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void serialize_embeddings(const EmbeddingSpace& space, std::ostream& out) {
  out << space.size() << ' ' << space.dim() << '\n';
  for (std::size_t i = 0; i < space.size(); ++i) {
    out << space.word(i);
    for (double v : space.row(i)) out << ' ' << text::sig6(v);
    out << '\n';
  }
}

EmbeddingSpace normalize(const EmbeddingSpace& space) {
  RowMatrix rows = space.vectors();
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double norm = rows.row(i).norm();
    if (norm == 0.0) {
      throw InputError("cannot normalize zero vector for word '" +
                       space.word(static_cast<std::size_t>(i)) + "'");
    }
    rows.row(i) /= norm;
  }
  return EmbeddingSpace(space.language(), space.vocab(), std::move(rows), true);
}

std::optional<Vector> lookup(const EmbeddingSpace& space, std::string_view word) {
  const auto row = space.find(word);
  if (!row) return std::nullopt;
  return space.vectors().row(static_cast<Eigen::Index>(*row)).transpose();
}

std::vector<NeighborHit> nearest_neighbor(const EmbeddingSpace& space, std::span<const double> query,
                                          std::size_t k) {
  if (!space.normalized()) throw InputError("nearest_neighbor requires a normalized space");
  if (k < 1 || k > space.size()) {
    throw InputError("k must be in [1, " + std::to_string(space.size()) + "], got " +
                     std::to_string(k));
  }
  if (query.size() != space.dim()) throw InputError("query dimension mismatch");
  double norm2 = 0;
  for (double v : query) norm2 += v * v;
  if (std::abs(std::sqrt(norm2) - 1.0) > kUnitNormTolerance) {
    throw InputError("nearest_neighbor query must be unit-norm");
  }
  const auto ranked = kernels::top_k_parallel(space.vectors(), query, k);
  std::vector<NeighborHit> hits;
  hits.reserve(ranked.size());
  for (const auto& r : ranked) {
    hits.push_back({space.word(r.index), std::clamp(r.similarity, -1.0, 1.0), r.index});
  }
  return hits;
}

}  // namespace cognate
