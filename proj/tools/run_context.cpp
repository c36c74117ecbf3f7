#include "run_context.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "freepoints/errors.hpp"
#include "freepoints/version.hpp"

namespace freepoints::cli {

namespace {

std::string PrefixPath(std::filesystem::path const& prefix, std::string const& ext) {
  return prefix.string() + "." + ext;
}

std::string ScalarToken(Json const& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  return value.dump();
}

}  // namespace

RunContext::RunContext(std::string command, std::optional<std::filesystem::path> prefix)
    : command_(std::move(command)), prefix_(std::move(prefix)) {
  if (!prefix_) return;
  if (prefix_->has_parent_path()) std::filesystem::create_directories(prefix_->parent_path());
  lock_ = PrefixPath(*prefix_, "lock");
  int const fd = ::open(lock_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    lock_.clear();
    throw DomainError("output prefix " + prefix_->string() +
                      " is locked by another run (remove the .lock file if stale)");
  }
  std::string const pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto const written = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

RunContext::~RunContext() {
  if (!lock_.empty()) {
    std::error_code ec;
    std::filesystem::remove(lock_, ec);
  }
}

void RunContext::WriteArtifact(std::string const& ext, std::string const& content) {
  if (!prefix_) return;
  std::string const path = PrefixPath(*prefix_, ext);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path);
  out << content;
  artifacts_.push_back(path);
}

void RunContext::Emit(Json const& result) {
  if (prefix_) {
    WriteArtifact("json", result.dump(2) + "\n");
  } else {
    std::cout << result.dump(2) << "\n";
  }
}

void RunContext::EmitText(std::string const& text) {
  if (prefix_) {
    WriteArtifact("txt", text + "\n");
  } else {
    std::cout << text << "\n";
  }
}

void RunContext::WriteManifest(CLI::App const& sub, std::uint64_t budget) {
  if (!prefix_) return;
  Json params = Json::object();
  for (CLI::Option const* opt : sub.get_options()) {
    std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    if (opt->get_expected_min() == 0) {
      params[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      auto const& results = opt->results();
      if (results.size() == 1) {
        params[name] = results.front();
      } else {
        params[name] = results;
      }
    } else if (!opt->get_default_str().empty()) {
      params[name] = opt->get_default_str();
    } else {
      params[name] = nullptr;
    }
  }
  Json manifest;
  manifest["command"] = command_;
  manifest["version"] = std::string(Version());
  params["budget"] = budget;
  manifest["params"] = params;
  manifest["budget"] = budget;
  manifest["output"] = prefix_->string();
  manifest["artifacts"] = artifacts_;
  std::ofstream out(PrefixPath(*prefix_, "manifest.json"), std::ios::binary);
  out << manifest.dump(2) << "\n";
}

std::vector<std::string> ExpandConfig(std::vector<std::string> args) {
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end() || std::next(it) == args.end()) return args;
  std::string const path = *std::next(it);
  args.erase(it, std::next(it, 2));
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config " + path);
  Json config;
  try {
    config = Json::parse(in);
  } catch (Json::parse_error const& e) {
    throw DomainError("config " + path + " is not valid JSON: " + e.what());
  }
  std::vector<std::string> injected;
  if (config.contains("form_file")) {
    injected.push_back("--form");
    injected.push_back(config["form_file"].get<std::string>());
  }
  if (config.contains("output")) {
    injected.push_back("--output");
    injected.push_back(config["output"].get<std::string>());
  }
  if (config.contains("params")) {
    for (auto const& [key, value] : config["params"].items()) {
      if (value.is_boolean()) {
        if (value.get<bool>()) injected.push_back("--" + key);
        continue;
      }
      injected.push_back("--" + key);
      injected.push_back(ScalarToken(value));
    }
  }
  // args[0] is the program; the subcommand comes from the config when absent.
  std::size_t insert_at = 1;
  if (config.contains("command")) {
    std::string const command = config["command"].get<std::string>();
    if (args.size() < 2 || args[1] != command) args.insert(args.begin() + 1, command);
  }
  if (args.size() < 2) throw DomainError("config names no command");
  insert_at = 2;
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(insert_at), injected.begin(),
              injected.end());
  return args;
}

}  // namespace freepoints::cli
