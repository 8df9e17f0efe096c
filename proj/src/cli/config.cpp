#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cognate/cli.hpp"
#include "cognate/errors.hpp"
#include "cognate/text_io.hpp"

namespace cognate::cli {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

std::vector<LanguageTag> parse_language_list(const std::string& comma_separated) {
  std::vector<LanguageTag> langs;
  for (const auto& part : text::split(comma_separated, ',')) {
    const auto code = text::trim(part);
    if (!code.empty()) langs.emplace_back(std::string(code));
  }
  return langs;
}

RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("config must be a JSON object");

  RunConfig config;
  try {
    if (doc.contains("pivot")) config.pivot = LanguageTag(doc.at("pivot").get<std::string>());
    if (doc.contains("languages")) {
      for (const auto& [code, entry] : doc.at("languages").items()) {
        LanguageSource source;
        if (entry.is_string()) {
          source.embeddings = resolve(base_dir, entry.get<std::string>());
        } else {
          source.embeddings = resolve(base_dir, entry.at("embeddings").get<std::string>());
          if (entry.contains("seeds")) source.seeds = resolve(base_dir, entry.at("seeds").get<std::string>());
          if (entry.contains("matrix")) source.matrix = resolve(base_dir, entry.at("matrix").get<std::string>());
        }
        config.languages.emplace(LanguageTag(code), std::move(source));
      }
    }
    if (doc.contains("cognates")) config.cognates = resolve(base_dir, doc.at("cognates").get<std::string>());
    if (doc.contains("etymon_language")) {
      config.etymon_language = LanguageTag(doc.at("etymon_language").get<std::string>());
    }
    if (doc.contains("limit")) config.limit = doc.at("limit").get<std::size_t>();
    if (doc.contains("histogram")) config.histogram = doc.at("histogram").get<bool>();
    if (doc.contains("threshold")) config.threshold = doc.at("threshold").get<double>();
    if (doc.contains("search_k")) config.search_k = doc.at("search_k").get<std::size_t>();
    if (doc.contains("out")) config.out = resolve(base_dir, doc.at("out").get<std::string>());
    if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("langs")) {
      for (const auto& code : doc.at("langs")) config.langs.emplace_back(code.get<std::string>());
    }
    if (doc.contains("gold")) config.gold = resolve(base_dir, doc.at("gold").get<std::string>());
    if (doc.contains("synsets")) config.synsets = resolve(base_dir, doc.at("synsets").get<std::string>());
    if (doc.contains("similarity_matrix")) {
      config.similarity_matrix = resolve(base_dir, doc.at("similarity_matrix").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid config: ") + e.what());
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  auto in = text::open_input(path, "config");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

}  // namespace cognate::cli
