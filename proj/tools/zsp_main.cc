// Command-line front end: data generation, training, parsing and experiments.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "zsp/config.h"
#include "zsp/dataset.h"
#include "zsp/delex.h"
#include "zsp/errors.h"
#include "zsp/execute.h"
#include "zsp/experiment.h"
#include "zsp/lf.h"
#include "zsp/mapper.h"
#include "zsp/parser.h"
#include "zsp/student.h"
#include "zsp/synth.h"
#include "zsp/teacher.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace zsp;
using pipeline::Example;

namespace {

// Dev membership for commands that train on whatever files they are given.
bool isDev(const std::string& id, double devFrac) {
  std::uint64_t h = pipeline::stableHash(id);
  return static_cast<double>(h >> 11) * 0x1.0p-53 < devFrac;
}

std::vector<Example> readExamples(const std::vector<std::string>& paths) {
  std::vector<Example> out;
  for (auto& [domain, examples] : pipeline::loadDataset(paths)) {
    for (auto& e : examples) out.push_back(std::move(e));
  }
  return out;
}

// KBs by domain, looked up as <dir>/<domain>.kb.json.
class KbCache {
 public:
  explicit KbCache(std::string dir) : dir_(std::move(dir)) {}
  const kb::LoadedKb& get(const std::string& domain) {
    auto it = kbs_.find(domain);
    if (it == kbs_.end()) {
      it = kbs_.emplace(domain, kb::loadKB(dir_ + "/" + domain + ".kb.json")).first;
    }
    return it->second;
  }

 private:
  std::string dir_;
  std::map<std::string, kb::LoadedKb> kbs_;
};

std::string defaultKbDir(const std::vector<std::string>& data) {
  if (data.empty()) return ".";
  fs::path parent = fs::path(data.front()).parent_path();
  return parent.empty() ? "." : parent.string();
}

delex::AdjectiveStats statsOf(const std::vector<Example>& examples) {
  std::vector<std::pair<std::string, const Example*>> items;
  for (const auto& e : examples) items.emplace_back(e.domain, &e);
  return pipeline::adjectiveStats(items);
}

std::ofstream openOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

std::vector<std::string> domainsIn(const std::string& dir) {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    const std::string suffix = ".kb.json";
    if (name.size() > suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      out.push_back(name.substr(0, name.size() - suffix.size()));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct ExperimentArgs {
  std::string configPath;
  std::vector<std::string> overrides;
  std::string data;
  std::string jsonOut;
};

pipeline::ExperimentConfig experimentConfig(const ExperimentArgs& args,
                                            std::string& dataDir,
                                            std::vector<std::string>& domains) {
  pipeline::KeyValues values;
  if (!args.configPath.empty()) values = pipeline::loadKeyValues(args.configPath);
  for (auto& [k, v] : pipeline::parseOverrides(args.overrides)) values[k] = v;
  pipeline::ExperimentConfig config;
  pipeline::applyConfig(config, values);
  dataDir = !args.data.empty() ? args.data
            : values.count("data") ? values.at("data")
                                   : std::string();
  if (dataDir.empty()) throw ConfigError("no data directory (--data or data=)");
  if (values.count("domains")) {
    std::stringstream in(values.at("domains"));
    std::string d;
    while (std::getline(in, d, ',')) {
      if (!d.empty()) domains.push_back(d);
    }
  } else {
    domains = domainsIn(dataDir);
  }
  return config;
}

ordered_json traceJson(const infer::ParseResult& r) {
  ordered_json hyps = ordered_json::array();
  for (const auto& h : r.hypotheses) {
    ordered_json j;
    j["rank"] = h.rank;
    j["tokens"] = h.tokens;
    j["mapper_score"] = h.mapperScore;
    j["valid"] = h.valid;
    j["steps"] = h.steps;
    j["succeeded"] = h.succeeded;
    if (!h.error.empty()) j["error"] = h.error;
    hyps.push_back(std::move(j));
  }
  return hyps;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-shot semantic parsing via abstract structures"};
  app.require_subcommand(1);

  // synth-gen
  pipeline::SynthConfig synth;
  std::string synthOut;
  auto* synthCmd = app.add_subcommand("synth-gen", "Generate the synthetic multi-domain corpus");
  synthCmd->add_option("--out", synthOut, "Output directory")->required();
  synthCmd->add_option("--samples", synth.samplesPerDomain, "Examples per domain");
  synthCmd->add_option("--seed", synth.seed, "Generator seed");
  synthCmd->add_option("--domains", synth.domains, "Subset of built-in domains")->delimiter(',');
  synthCmd->add_option("--dim", synth.embeddingDim, "Embedding dimension");
  synthCmd->add_option("--noise", synth.embeddingNoise, "Embedding noise");

  // delex
  std::vector<std::string> data;
  std::string kbDir, kbPath, text, out;
  auto* delexCmd = app.add_subcommand("delex", "Delexicalize examples or a sentence");
  delexCmd->add_option("--data", data, "Dataset files (JSON Lines)");
  delexCmd->add_option("--kb-dir", kbDir, "Directory of <domain>.kb.json files");
  delexCmd->add_option("--kb", kbPath, "KB file for --text");
  delexCmd->add_option("--text", text, "Sentence to tag and delexicalize");
  delexCmd->add_option("--out", out, "Output file (default stdout)");

  // train-teacher
  align::TeacherConfig teacherConfig;
  auto* teacherCmd = app.add_subcommand("train-teacher", "Train the word aligner and write A*");
  teacherCmd->add_option("--data", data, "Dataset files")->required();
  teacherCmd->add_option("--out", out, "Alignment sidecar")->required();
  teacherCmd->add_option("--iterations", teacherConfig.iterations, "EM iterations");
  teacherCmd->add_option("--p0", teacherConfig.p0, "NULL probability");
  teacherCmd->add_option("--tension", teacherConfig.tension, "Diagonal tension");

  // train-mapper
  mapper::MapperConfig mapperConfig;
  double devFrac = 0.2;
  int hidden = mapperConfig.model.hidden;
  auto* mapperCmd = app.add_subcommand("train-mapper", "Train the structure mapper");
  mapperCmd->add_option("--data", data, "Dataset files")->required();
  mapperCmd->add_option("--kb-dir", kbDir, "Directory of <domain>.kb.json files");
  mapperCmd->add_option("--out", out, "Checkpoint")->required();
  mapperCmd->add_option("--epochs", mapperConfig.train.epochs);
  mapperCmd->add_option("--hidden", hidden);
  mapperCmd->add_option("--embed", mapperConfig.model.embed);
  mapperCmd->add_option("--lr", mapperConfig.train.optimizer.lr);
  mapperCmd->add_option("--l2", mapperConfig.train.optimizer.l2);
  mapperCmd->add_option("--dev-frac", devFrac);
  mapperCmd->add_option("--seed", mapperConfig.train.seed);

  // train-aligner
  align::AlignerConfig alignerConfig;
  align::AlignerTrainConfig alignerTrain;
  std::string alignments;
  auto* alignerCmd = app.add_subcommand("train-aligner", "Train the slot aligner on A*");
  alignerCmd->add_option("--data", data, "Dataset files")->required();
  alignerCmd->add_option("--kb-dir", kbDir, "Directory of <domain>.kb.json files");
  alignerCmd->add_option("--alignments", alignments, "Sidecar from train-teacher")->required();
  alignerCmd->add_option("--out", out, "Checkpoint")->required();
  alignerCmd->add_option("--epochs", alignerTrain.epochs);
  alignerCmd->add_option("--hidden", alignerConfig.hidden);
  alignerCmd->add_option("--embed", alignerConfig.embed);
  alignerCmd->add_option("--dropout", alignerConfig.dropout);
  alignerCmd->add_option("--lr", alignerTrain.optimizer.lr);
  alignerCmd->add_option("--dev-frac", devFrac);
  alignerCmd->add_option("--seed", alignerTrain.seed);

  // parse
  std::string mapperPath, alignerPath, embeddingsPath, input;
  std::vector<std::string> trainData;
  infer::ParseOptions parseOptions;
  std::string ablate;
  auto* parseCmd = app.add_subcommand("parse", "Parse annotated utterances");
  parseCmd->add_option("--mapper", mapperPath)->required();
  parseCmd->add_option("--aligner", alignerPath);
  parseCmd->add_option("--kb", kbPath)->required();
  parseCmd->add_option("--embeddings", embeddingsPath)->required();
  parseCmd->add_option("--train-data", trainData,
                       "Training files for the adjective statistics");
  parseCmd->add_option("--beam", parseOptions.beam);
  parseCmd->add_option("--T", parseOptions.maxSteps, "Inference step budget");
  parseCmd->add_option("--ablate", ablate, "aligner, inference, globalheur (comma-separated)");
  parseCmd->add_option("--input", input)->required();
  parseCmd->add_option("--out", out)->required();

  // eval
  std::string predictions;
  auto* evalCmd = app.add_subcommand("eval", "Denotation accuracy of parse output");
  evalCmd->add_option("--predictions", predictions, "Output of parse")->required();
  evalCmd->add_option("--gold", input, "Gold dataset file")->required();
  evalCmd->add_option("--kb", kbPath)->required();

  // experiment
  ExperimentArgs exp;
  std::vector<std::string> targets;
  auto* expCmd = app.add_subcommand("experiment", "Run a configured experiment");
  expCmd->add_option("--config", exp.configPath, "key = value file");
  expCmd->add_option("--set", exp.overrides, "key=value override");
  expCmd->add_option("--data", exp.data, "Corpus directory");
  expCmd->add_option("--targets", targets,
                     "Target domains (default: target= or every domain)")->delimiter(',');
  expCmd->add_option("--json", exp.jsonOut, "Report records (JSON Lines)");

  // learning-curve
  std::vector<double> fractions{0.1, 0.3, 0.5, 1.0};
  std::optional<double> reference;
  auto* curveCmd = app.add_subcommand("learning-curve", "InLex accuracy against training fraction");
  curveCmd->add_option("--config", exp.configPath);
  curveCmd->add_option("--set", exp.overrides);
  curveCmd->add_option("--data", exp.data);
  curveCmd->add_option("--fractions", fractions)->delimiter(',');
  curveCmd->add_option("--reference", reference, "Zero-shot accuracy for the crossover");
  curveCmd->add_option("--json", exp.jsonOut);

  auto* grammarCmd = app.add_subcommand("grammar", "Print the linearized token grammar");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synthCmd) {
      pipeline::SynthCorpus corpus = pipeline::synthGen(synth);
      fs::create_directories(synthOut);
      pipeline::writeSynth(corpus, synthOut);
      std::size_t n = 0;
      for (const auto& d : corpus.corpus.domains) n += d.examples.size();
      std::cerr << "wrote " << corpus.corpus.domains.size() << " domains, " << n
                << " examples, " << corpus.words.size() << " word vectors to "
                << synthOut << "\n";
    } else if (*delexCmd) {
      std::ofstream file;
      if (!out.empty()) file = openOut(out);
      std::ostream& os = out.empty() ? std::cout : file;
      if (!text.empty()) {
        if (kbPath.empty()) throw ConfigError("--text needs --kb");
        kb::LoadedKb kb = kb::loadKB(kbPath);
        auto tokens = delex::tagText(text);
        auto u = delex::delexUtterance(tokens, kb.kb, delex::AdjectiveStats(), "");
        os << u.text() << "\n";
      } else {
        if (data.empty()) throw ConfigError("delex needs --data or --text");
        std::vector<Example> examples = readExamples(data);
        KbCache kbs(kbDir.empty() ? defaultKbDir(data) : kbDir);
        delex::AdjectiveStats stats = statsOf(examples);
        for (const auto& e : examples) {
          auto a = pipeline::abstractExample(e, kbs.get(e.domain).kb, stats);
          ordered_json j;
          j["id"] = e.id;
          j["domain"] = e.domain;
          j["utterance"] = a.utterance.tokens;
          j["logical_form"] = a.lf.tokens;
          j["slots"] = a.lf.slots;
          j["fillers"] = a.lf.fillers;
          os << j.dump() << "\n";
        }
      }
    } else if (*teacherCmd) {
      std::vector<Example> examples = readExamples(data);
      std::vector<align::LexicalPair> pairs;
      for (const auto& e : examples) pairs.push_back(pipeline::lexicalPair(e));
      align::Teacher teacher(teacherConfig);
      std::vector<double> ll = teacher.train(pairs);
      std::ofstream file = openOut(out);
      for (std::size_t i = 0; i < examples.size(); ++i) {
        file << examples[i].id << '\t' << align::formatLinks(teacher.viterbi(pairs[i]))
             << '\n';
      }
      for (std::size_t i = 0; i < ll.size(); ++i) {
        std::cerr << "iteration " << i << " log-likelihood " << ll[i] << "\n";
      }
    } else if (*mapperCmd) {
      mapperConfig.model.hidden = hidden;
      mapperConfig.model.decoderHidden = hidden;
      std::vector<Example> examples = readExamples(data);
      KbCache kbs(kbDir.empty() ? defaultKbDir(data) : kbDir);
      delex::AdjectiveStats stats = statsOf(examples);
      std::vector<mapper::SeqPair> train, dev;
      for (const auto& e : examples) {
        auto a = pipeline::abstractExample(e, kbs.get(e.domain).kb, stats);
        (isDev(e.id, devFrac) ? dev : train).push_back({a.input, a.lf.tokens});
      }
      mapper::TrainReport report;
      auto m = mapper::StructureMapper::train(train, dev, mapperConfig, &report);
      m->save(out);
      for (const auto& ep : report.epochs) {
        std::cerr << "epoch " << ep.epoch << " loss " << ep.loss << " dev "
                  << ep.devAccuracy << "\n";
      }
      std::cerr << "best epoch " << report.bestEpoch << "\n";
    } else if (*alignerCmd) {
      std::vector<Example> examples = readExamples(data);
      KbCache kbs(kbDir.empty() ? defaultKbDir(data) : kbDir);
      delex::AdjectiveStats stats = statsOf(examples);
      std::map<std::string, std::string> sidecar;
      {
        std::ifstream in(alignments);
        if (!in) throw FormatError(alignments, 0, "cannot open file");
        std::string line;
        while (std::getline(in, line)) {
          std::size_t tab = line.find('\t');
          if (tab == std::string::npos) continue;
          sidecar[line.substr(0, tab)] = line.substr(tab + 1);
        }
      }
      std::vector<align::AlignedPair> train, dev;
      for (const auto& e : examples) {
        auto it = sidecar.find(e.id);
        if (it == sidecar.end()) {
          throw FormatError(alignments, 0, "no alignment for example " + e.id);
        }
        auto a = pipeline::abstractExample(e, kbs.get(e.domain).kb, stats);
        align::Links lexical = align::parseLinks(it->second, a.lf.tokens.size());
        (isDev(e.id, devFrac) ? dev : train)
            .push_back({a.input, a.lf.tokens, a.lf.slots,
                        pipeline::projectLinks(lexical, a.utterance)});
      }
      align::AlignerReport report;
      auto aligner =
          align::SlotAligner::train(train, dev, alignerConfig, alignerTrain, &report);
      aligner->save(out);
      std::cerr << "best epoch " << report.bestEpoch << " dev alignment accuracy "
                << report.bestDevAccuracy << "\n";
    } else if (*parseCmd) {
      pipeline::Ablation ablation =
          ablate.empty() ? pipeline::Ablation{} : pipeline::parseAblation(ablate);
      if (ablation.noAligner) parseOptions.alignment = infer::AlignmentSource::kAttention;
      parseOptions.exactInference = !ablation.noInference;
      parseOptions.global.requireOnce = !ablation.noGlobalHeur;
      auto m = mapper::StructureMapper::load(mapperPath);
      std::unique_ptr<align::SlotAligner> aligner;
      if (!alignerPath.empty()) aligner = align::SlotAligner::load(alignerPath);
      kb::LoadedKb kb = kb::loadKB(kbPath);
      embed::EmbeddingTable embeddings = embed::loadEmbeddings(embeddingsPath);
      delex::AdjectiveStats stats = statsOf(readExamples(trainData));
      infer::Parser parser(*m, aligner.get(), kb.kb, kb.lexicon, embeddings, stats,
                           parseOptions);
      std::ofstream file = openOut(out);
      for (const auto& e : pipeline::loadExamples(input)) {
        infer::ParseResult r = parser.parse(e.tokens);
        ordered_json j;
        j["id"] = e.id;
        j["abstract_utterance"] = r.utterance.tokens;
        j["logical_form"] = r.lf ? ordered_json(lf::printLF(*r.lf)) : ordered_json(nullptr);
        j["chosen"] = r.chosen ? ordered_json(*r.chosen) : ordered_json(nullptr);
        j["steps"] = r.steps();
        j["hypotheses"] = traceJson(r);
        file << j.dump() << "\n";
      }
    } else if (*evalCmd) {
      kb::LoadedKb kb = kb::loadKB(kbPath);
      std::map<std::string, std::optional<lf::LogicalForm>> predicted;
      std::ifstream in(predictions);
      if (!in) throw FormatError(predictions, 0, "cannot open file");
      std::string line;
      std::size_t lineNo = 0;
      while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        try {
          auto j = nlohmann::json::parse(line);
          const auto& f = j.at("logical_form");
          predicted[j.at("id").get<std::string>()] =
              f.is_null() ? std::nullopt
                          : std::optional(lf::parseLF(f.get<std::string>()));
        } catch (const std::exception& ex) {
          throw FormatError(predictions, lineNo, ex.what());
        }
      }
      std::vector<std::optional<lf::LogicalForm>> preds;
      std::vector<lf::LogicalForm> golds;
      for (const auto& e : pipeline::loadExamples(input)) {
        auto it = predicted.find(e.id);
        preds.push_back(it == predicted.end() ? std::nullopt : it->second);
        golds.push_back(e.lf);
      }
      double acc = pipeline::evalDenotation(preds, golds, kb.kb);
      std::cout << "examples " << golds.size() << " denotation_accuracy " << acc << "\n";
    } else if (*expCmd) {
      std::string dataDir;
      std::vector<std::string> domains;
      pipeline::ExperimentConfig config = experimentConfig(exp, dataDir, domains);
      pipeline::Corpus corpus = pipeline::loadCorpus(dataDir, domains);
      if (targets.empty()) targets = config.target.empty() ? domains : std::vector{config.target};
      std::ofstream file;
      if (!exp.jsonOut.empty()) file = openOut(exp.jsonOut);
      auto start = std::chrono::steady_clock::now();
      std::map<std::string, double> sums;
      for (const auto& target : targets) {
        config.target = target;
        pipeline::MetricsReport report = pipeline::runExperiment(config, corpus);
        std::cout << report.table() << std::flush;
        if (file) file << report.json() << "\n" << std::flush;
        for (const auto& v : report.variants) sums[v.name] += v.meanAccuracy;
      }
      if (targets.size() > 1) {
        std::cout << "average over " << targets.size() << " targets\n";
        for (const auto& [name, sum] : sums) {
          std::cout << "  " << name << " "
                    << 100 * sum / static_cast<double>(targets.size()) << "\n";
        }
      }
      std::cerr << "elapsed "
                << std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                       .count()
                << " s\n";
    } else if (*curveCmd) {
      std::string dataDir;
      std::vector<std::string> domains;
      pipeline::ExperimentConfig config = experimentConfig(exp, dataDir, domains);
      if (config.target.empty()) throw ConfigError("learning-curve needs target=");
      pipeline::Corpus corpus = pipeline::loadCorpus(dataDir, domains);
      pipeline::LearningCurve curve = pipeline::learningCurve(
          corpus, config.target, fractions, config.seeds, config.hyper, reference);
      for (const auto& p : curve.points) {
        std::cout << "fraction " << p.fraction << " mean " << 100 * p.meanAccuracy
                  << " min " << 100 * p.minAccuracy << " max " << 100 * p.maxAccuracy
                  << "\n";
      }
      if (curve.crossover) std::cout << "crossover " << *curve.crossover << "\n";
      if (!exp.jsonOut.empty()) openOut(exp.jsonOut) << curve.json() << "\n";
    } else if (*grammarCmd) {
      std::cout << lf::tokenGrammar();
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
