#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "reftrace/provider.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <httplib.h>
#include <json.hpp>
#include <sstream>

#include "reftrace/errors.hpp"

namespace reftrace {

std::string requestDigest(const std::string& requestContent) {
  unsigned char hash[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(requestContent.data(), requestContent.size(), hash, &length, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[hash[i] >> 4]);
    out.push_back(hex[hash[i] & 0xF]);
  }
  return out;
}

ReplayProvider::ReplayProvider(const std::filesystem::path& scriptPath) {
  std::ifstream in(scriptPath, std::ios::binary);
  if (!in) throw DataError("cannot read replay script " + scriptPath.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed replay script " + scriptPath.string() + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw DataError("replay script " + scriptPath.string() + " must be a JSON object");
  }
  for (const auto& [digest, response] : doc.items()) {
    if (!response.is_string()) {
      throw DataError("replay script entry " + digest + " must map to a string");
    }
    script_[digest] = response.get<std::string>();
  }
}

ProviderResult ReplayProvider::complete(const std::string& requestContent) {
  requests_.fetch_add(1);
  ProviderResult result;
  std::string digest = requestDigest(requestContent);
  auto it = script_.find(digest);
  if (it == script_.end()) {
    result.error = "replay script has no entry for request digest " + digest;
    return result;  // permanent: retrying cannot add entries to the script
  }
  result.ok = true;
  result.text = it->second;
  return result;
}

LiveHttpProvider::LiveHttpProvider(LiveProviderConfig config) : config_(std::move(config)) {}

namespace {

struct ParsedUrl {
  std::string base;  // scheme://host[:port]
  std::string path;  // /v1/...
};

ParsedUrl parseUrl(const std::string& url) {
  auto schemeEnd = url.find("://");
  if (schemeEnd == std::string::npos) throw DataError("endpoint URL missing scheme: " + url);
  auto pathStart = url.find('/', schemeEnd + 3);
  if (pathStart == std::string::npos) return {url, "/"};
  return {url.substr(0, pathStart), url.substr(pathStart)};
}

}  // namespace

ProviderResult LiveHttpProvider::complete(const std::string& requestContent) {
  ProviderResult result;
  ParsedUrl url;
  try {
    url = parseUrl(config_.endpoint);
  } catch (const DataError& e) {
    result.error = e.what();
    return result;
  }

  nlohmann::json body = {
      {"model", config_.model},
      {"temperature", config_.temperature},
      {"messages", nlohmann::json::array({nlohmann::json{{"role", "user"},
                                                         {"content", requestContent}}})},
  };

  httplib::Client client(url.base);
  client.set_connection_timeout(config_.timeoutSeconds, 0);
  client.set_read_timeout(config_.timeoutSeconds, 0);
  client.set_write_timeout(config_.timeoutSeconds, 0);
  httplib::Headers headers;
  if (!config_.apiKey.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.apiKey);
  }

  auto response = client.Post(url.path, headers, body.dump(), "application/json");
  if (!response) {
    result.retryable = true;
    result.error = "transport failure: " + httplib::to_string(response.error());
    return result;
  }
  if (response->status != 200) {
    result.retryable = response->status == 429 || response->status >= 500;
    result.error = "HTTP " + std::to_string(response->status) + ": " + response->body;
    return result;
  }

  try {
    nlohmann::json doc = nlohmann::json::parse(response->body);
    result.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
    if (doc.contains("usage")) {
      const auto& usage = doc["usage"];
      if (usage.contains("prompt_tokens")) result.promptTokens = usage["prompt_tokens"].get<long long>();
      if (usage.contains("completion_tokens")) {
        result.completionTokens = usage["completion_tokens"].get<long long>();
      }
    }
    result.ok = true;
  } catch (const nlohmann::json::exception& e) {
    result.error = std::string("malformed completion response: ") + e.what();
  }
  return result;
}

RecordingProvider::RecordingProvider(Provider& inner, std::filesystem::path outPath)
    : inner_(inner), outPath_(std::move(outPath)) {}

RecordingProvider::~RecordingProvider() {
  try {
    flush();
  } catch (...) {
    // Destructors must not throw; an unwritable recording loses only the
    // replay fixture, not the run itself.
  }
}

ProviderResult RecordingProvider::complete(const std::string& requestContent) {
  ProviderResult result = inner_.complete(requestContent);
  if (result.ok) {
    std::lock_guard<std::mutex> lock(mutex_);
    recorded_[requestDigest(requestContent)] = result.text;
  }
  return result;
}

std::string RecordingProvider::kind() const { return inner_.kind(); }

void RecordingProvider::flush() {
  std::lock_guard<std::mutex> lock(mutex_);
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [digest, response] : recorded_) doc[digest] = response;
  std::ofstream out(outPath_, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write replay recording " + outPath_.string());
  out << doc.dump(2) << "\n";
}

}  // namespace reftrace
