#include "zsp/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "zsp/errors.h"

namespace zsp::pipeline {

namespace {

std::string_view trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> splitList(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::string_view t = trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

[[noreturn]] void badValue(const std::string& key, const std::string& value,
                           const char* expected) {
  throw ConfigError("bad value '" + value + "' for " + key + " (expected " +
                    expected + ")");
}

int toInt(const std::string& key, const std::string& value, int min) {
  int x = 0;
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc() || end != value.data() + value.size()) {
    badValue(key, value, "an integer");
  }
  if (x < min) {
    throw ConfigError(key + " must be at least " + std::to_string(min));
  }
  return x;
}

double toDouble(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double x = std::stod(value, &used);
    if (used == value.size()) return x;
  } catch (const std::exception&) {
  }
  badValue(key, value, "a number");
}

bool toBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  badValue(key, value, "true or false");
}

std::uint64_t toSeed(const std::string& key, const std::string& value) {
  std::uint64_t x = 0;
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc() || end != value.data() + value.size()) {
    badValue(key, value, "an unsigned integer");
  }
  return x;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key,
                                  const std::string& value)>;

void addModel(std::map<std::string, Setter>& t, const std::string& prefix,
              std::function<nn::Seq2SeqConfig&(ExperimentConfig&)> model,
              std::function<mapper::TrainConfig&(ExperimentConfig&)> train) {
  t[prefix + ".embed"] = [model](auto& c, auto& k, auto& v) {
    model(c).embed = toInt(k, v, 1);
  };
  t[prefix + ".hidden"] = [model](auto& c, auto& k, auto& v) {
    model(c).hidden = toInt(k, v, 1);
    model(c).decoderHidden = model(c).hidden;
  };
  t[prefix + ".dropout"] = [model](auto& c, auto& k, auto& v) {
    model(c).dropout = toDouble(k, v);
  };
  t[prefix + ".init_scale"] = [model](auto& c, auto& k, auto& v) {
    model(c).initScale = toDouble(k, v);
  };
  t[prefix + ".epochs"] = [train](auto& c, auto& k, auto& v) {
    train(c).epochs = toInt(k, v, 0);
  };
  t[prefix + ".lr"] = [train](auto& c, auto& k, auto& v) {
    train(c).optimizer.lr = toDouble(k, v);
  };
  t[prefix + ".l2"] = [train](auto& c, auto& k, auto& v) {
    train(c).optimizer.l2 = toDouble(k, v);
  };
}

nn::OptimizerConfig::Kind toOptimizer(const std::string& key,
                                      const std::string& value) {
  if (value == "sgd") return nn::OptimizerConfig::Kind::kSgd;
  if (value == "adam") return nn::OptimizerConfig::Kind::kAdam;
  badValue(key, value, "sgd or adam");
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["mode"] = [](auto& c, auto&, auto& v) { c.mode = parseMode(v); };
    t["target"] = [](auto& c, auto&, auto& v) { c.target = v; };
    t["sources"] = [](auto& c, auto&, auto& v) { c.sources = splitList(v); };
    t["seeds"] = [](auto& c, auto& k, auto& v) {
      c.seeds.clear();
      for (const auto& s : splitList(v)) c.seeds.push_back(toSeed(k, s));
    };
    // Variants are separated by ';' since one variant may list several
    // ablations with ','.
    t["variants"] = [](auto& c, auto&, auto& v) {
      c.variants.clear();
      std::stringstream in(v);
      std::string item;
      while (std::getline(in, item, ';')) {
        std::string_view s = trim(item);
        if (!s.empty()) c.variants.push_back(parseAblation(s));
      }
    };
    t["beam"] = [](auto& c, auto& k, auto& v) { c.hyper.beam = toInt(k, v, 1); };
    t["max_steps"] = [](auto& c, auto& k, auto& v) {
      c.hyper.maxSteps = toInt(k, v, 1);
    };
    t["max_decode"] = [](auto& c, auto& k, auto& v) {
      c.hyper.maxDecode = toInt(k, v, 1);
      c.hyper.mapper.train.maxDecode = c.hyper.maxDecode;
      c.hyper.lexicalTrain.maxDecode = c.hyper.maxDecode;
    };
    t["require_nonempty"] = [](auto& c, auto& k, auto& v) {
      c.hyper.requireNonEmpty = toBool(k, v);
    };
    t["data"] = [](auto&, auto&, auto&) {};
    t["domains"] = [](auto&, auto&, auto&) {};

    addModel(t, "mapper",
             [](ExperimentConfig& c) -> nn::Seq2SeqConfig& { return c.hyper.mapper.model; },
             [](ExperimentConfig& c) -> mapper::TrainConfig& { return c.hyper.mapper.train; });
    addModel(t, "lexical",
             [](ExperimentConfig& c) -> nn::Seq2SeqConfig& { return c.hyper.lexical; },
             [](ExperimentConfig& c) -> mapper::TrainConfig& { return c.hyper.lexicalTrain; });
    t["mapper.optimizer"] = [](auto& c, auto& k, auto& v) {
      c.hyper.mapper.train.optimizer.kind = toOptimizer(k, v);
    };
    t["mapper.clip"] = [](auto& c, auto& k, auto& v) {
      c.hyper.mapper.train.optimizer.clipNorm = toDouble(k, v);
    };
    t["lexical.optimizer"] = [](auto& c, auto& k, auto& v) {
      c.hyper.lexicalTrain.optimizer.kind = toOptimizer(k, v);
    };
    t["lexical.clip"] = [](auto& c, auto& k, auto& v) {
      c.hyper.lexicalTrain.optimizer.clipNorm = toDouble(k, v);
    };

    t["aligner.embed"] = [](auto& c, auto& k, auto& v) {
      c.hyper.aligner.embed = toInt(k, v, 1);
    };
    t["aligner.hidden"] = [](auto& c, auto& k, auto& v) {
      c.hyper.aligner.hidden = toInt(k, v, 1);
    };
    t["aligner.dropout"] = [](auto& c, auto& k, auto& v) {
      c.hyper.aligner.dropout = toDouble(k, v);
    };
    t["aligner.init_scale"] = [](auto& c, auto& k, auto& v) {
      c.hyper.aligner.initScale = toDouble(k, v);
    };
    t["aligner.epochs"] = [](auto& c, auto& k, auto& v) {
      c.hyper.alignerTrain.epochs = toInt(k, v, 0);
    };
    t["aligner.lr"] = [](auto& c, auto& k, auto& v) {
      c.hyper.alignerTrain.optimizer.lr = toDouble(k, v);
    };
    t["aligner.l2"] = [](auto& c, auto& k, auto& v) {
      c.hyper.alignerTrain.optimizer.l2 = toDouble(k, v);
    };
    t["aligner.optimizer"] = [](auto& c, auto& k, auto& v) {
      c.hyper.alignerTrain.optimizer.kind = toOptimizer(k, v);
    };
    t["aligner.clip"] = [](auto& c, auto& k, auto& v) {
      c.hyper.alignerTrain.optimizer.clipNorm = toDouble(k, v);
    };

    t["teacher.iterations"] = [](auto& c, auto& k, auto& v) {
      c.hyper.teacher.iterations = toInt(k, v, 0);
    };
    t["teacher.p0"] = [](auto& c, auto& k, auto& v) {
      c.hyper.teacher.p0 = toDouble(k, v);
    };
    t["teacher.tension"] = [](auto& c, auto& k, auto& v) {
      c.hyper.teacher.tension = toDouble(k, v);
    };
    return t;
  }();
  return table;
}

}  // namespace

KeyValues parseKeyValues(std::string_view text, const std::string& source) {
  KeyValues out;
  std::size_t lineNo = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineNo;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError(source, lineNo, "expected key = value");
    }
    std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) throw FormatError(source, lineNo, "empty key");
    out[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

KeyValues loadKeyValues(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, 0, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parseKeyValues(buf.str(), path);
}

KeyValues parseOverrides(const std::vector<std::string>& items) {
  KeyValues out;
  for (const auto& item : items) {
    std::size_t eq = item.find('=');
    std::string_view key =
        eq == std::string::npos ? std::string_view{} : trim(std::string_view(item).substr(0, eq));
    if (key.empty()) throw ConfigError("override '" + item + "' is not key=value");
    out[std::string(key)] = std::string(trim(std::string_view(item).substr(eq + 1)));
  }
  return out;
}

void applyConfig(ExperimentConfig& config, const KeyValues& values) {
  const auto& table = setters();
  for (const auto& [key, value] : values) {
    auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(config, key, value);
  }
}

std::vector<std::string> configKeys() {
  std::vector<std::string> out;
  for (const auto& [key, setter] : setters()) out.push_back(key);
  return out;
}

}  // namespace zsp::pipeline
