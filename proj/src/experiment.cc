#include "zsp/experiment.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "zsp/errors.h"
#include "zsp/execute.h"

namespace zsp::pipeline {

using ojson = nlohmann::ordered_json;

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double round6(double x) { return std::round(x * 1e6) / 1e6; }

ojson optionalNumber(const std::optional<double>& x) {
  return x ? ojson(round6(*x)) : ojson(nullptr);
}

double fraction(std::size_t hits, std::size_t total) {
  return total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
}

std::vector<std::pair<std::string, const Example*>> trainingExamples(
    const Corpus& corpus, const std::vector<std::string>& domains) {
  std::vector<std::pair<std::string, const Example*>> out;
  for (const auto& name : domains) {
    const DomainData& d = corpus.domain(name);
    for (const auto& e : d.examples) {
      if (splitOf(e.id) != Split::kTest) out.emplace_back(name, &e);
    }
  }
  return out;
}

std::vector<std::string> inputWords(const Example& e) {
  std::vector<std::string> out;
  for (const auto& t : e.tokens) out.push_back(lower(t.surface));
  return out;
}

}  // namespace

std::string_view modeName(Mode mode) {
  switch (mode) {
    case Mode::kInLex: return "InLex";
    case Mode::kInAbstract: return "InAbstract";
    case Mode::kCrossLex: return "CrossLex";
    case Mode::kCrossLexRep: return "CrossLexRep";
    case Mode::kZeroShot: return "ZeroShot";
  }
  return "?";
}

Mode parseMode(std::string_view name) {
  for (Mode m : {Mode::kInLex, Mode::kInAbstract, Mode::kCrossLex,
                 Mode::kCrossLexRep, Mode::kZeroShot}) {
    if (lower(std::string(modeName(m))) == lower(std::string(name))) return m;
  }
  throw ConfigError("unknown mode '" + std::string(name) + "'");
}

bool isAbstractMode(Mode mode) {
  return mode == Mode::kInAbstract || mode == Mode::kZeroShot;
}

std::string Ablation::name() const {
  std::vector<std::string> parts;
  if (noAligner) parts.push_back("Aligner");
  if (noInference) parts.push_back("Inference");
  if (noGlobalHeur) parts.push_back("GlobalHeur");
  if (parts.empty()) return "full";
  std::string out = "-";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

Ablation parseAblation(std::string_view text) {
  Ablation a;
  std::string s = lower(std::string(text));
  if (s == "full" || s.empty()) return a;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (!part.empty() && part[0] == '-') part.erase(0, 1);
    if (part == "aligner") {
      a.noAligner = true;
    } else if (part == "inference") {
      a.noInference = true;
    } else if (part == "globalheur") {
      a.noGlobalHeur = true;
    } else {
      throw ConfigError("unknown ablation '" + part + "' in '" +
                        std::string(text) + "'");
    }
  }
  return a;
}

const VariantReport& MetricsReport::variant(std::string_view name) const {
  for (const auto& v : variants) {
    if (v.name == name) return v;
  }
  throw ConfigError("report has no variant '" + std::string(name) + "'");
}

std::string MetricsReport::json() const {
  ojson j;
  j["mode"] = std::string(modeName(mode));
  j["target"] = target;
  j["sources"] = sources;
  j["seeds"] = seeds;
  ojson vs = ojson::array();
  for (const auto& v : variants) {
    ojson vj;
    vj["name"] = v.name;
    vj["mean_accuracy"] = round6(v.meanAccuracy);
    vj["min_accuracy"] = round6(v.minAccuracy);
    vj["max_accuracy"] = round6(v.maxAccuracy);
    ojson runs = ojson::array();
    for (std::size_t i = 0; i < v.perSeed.size(); ++i) {
      const Metrics& m = v.perSeed[i];
      ojson r;
      r["seed"] = seeds[i];
      r["examples"] = m.examples;
      r["denotation_accuracy"] = round6(m.denotationAccuracy);
      r["abstract_exact_match"] = optionalNumber(m.abstractExactMatch);
      r["alignment_accuracy"] = optionalNumber(m.alignmentAccuracy);
      r["inference_success"] = optionalNumber(m.inferenceSuccess);
      r["mean_steps"] = optionalNumber(m.meanSteps);
      r["assignment_correct"] = optionalNumber(m.assignmentCorrect);
      runs.push_back(std::move(r));
    }
    vj["runs"] = std::move(runs);
    vs.push_back(std::move(vj));
  }
  j["variants"] = std::move(vs);
  return j.dump();
}

std::string MetricsReport::table() const {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s  target=%s\n", std::string(modeName(mode)).c_str(),
                target.c_str());
  out << buf;
  std::snprintf(buf, sizeof buf, "%-22s %8s %8s %8s\n", "variant", "mean", "min", "max");
  out << buf;
  for (const auto& v : variants) {
    std::snprintf(buf, sizeof buf, "%-22s %8.1f %8.1f %8.1f\n", v.name.c_str(),
                  100 * v.meanAccuracy, 100 * v.minAccuracy, 100 * v.maxAccuracy);
    out << buf;
  }
  return out.str();
}

AbstractExample abstractExample(const Example& example,
                                const kb::KnowledgeBase& kb,
                                const delex::AdjectiveStats& adjectives) {
  AbstractExample a;
  a.example = &example;
  a.utterance = delex::delexUtterance(example.tokens, kb, adjectives, example.domain);
  a.lf = delex::delexLogicalForm(example.lf, kb);
  a.input = mapper::mapperInput(a.utterance);
  return a;
}

delex::AdjectiveStats adjectiveStats(
    const std::vector<std::pair<std::string, const Example*>>& examples) {
  std::map<std::string, std::set<std::string>> byDomain;
  for (const auto& [domain, e] : examples) {
    auto& set = byDomain[domain];
    for (auto& lemma : delex::adjectiveLemmas(e->tokens)) set.insert(lemma);
  }
  return delex::AdjectiveStats(byDomain);
}

align::LexicalPair lexicalPair(const Example& example) {
  return {inputWords(example), lf::linearize(example.lf)};
}

align::Links projectLinks(const align::Links& lexical,
                          const delex::AbstractUtterance& utterance) {
  std::map<std::size_t, int> owner;
  for (std::size_t p = 0; p < utterance.sources.size(); ++p) {
    for (std::size_t j : utterance.sources[p]) owner[j] = static_cast<int>(p);
  }
  align::Links out;
  out.reserve(lexical.size());
  for (int j : lexical) {
    auto it = j < 0 ? owner.end() : owner.find(static_cast<std::size_t>(j));
    out.push_back(it == owner.end() ? -1 : it->second);
  }
  return out;
}

AbstractModels trainAbstractModels(const Corpus& corpus,
                                   const std::vector<std::string>& domains,
                                   const Hyper& hyper, std::uint64_t seed) {
  AbstractModels models;
  auto examples = trainingExamples(corpus, domains);
  models.adjectives = adjectiveStats(examples);

  std::vector<align::LexicalPair> lexical;
  for (const auto& [domain, e] : examples) lexical.push_back(lexicalPair(*e));
  models.teacher = align::Teacher(hyper.teacher);
  models.teacher.train(lexical);

  std::vector<mapper::SeqPair> mapTrain, mapDev;
  std::vector<align::AlignedPair> alignTrain, alignDev;
  for (std::size_t k = 0; k < examples.size(); ++k) {
    const Example& e = *examples[k].second;
    const DomainData& d = corpus.domain(examples[k].first);
    AbstractExample a = abstractExample(e, d.kb.kb, models.adjectives);
    align::Links links =
        projectLinks(models.teacher.viterbi(lexical[k]), a.utterance);
    bool dev = splitOf(e.id) == Split::kDev;
    (dev ? mapDev : mapTrain).push_back({a.input, a.lf.tokens});
    (dev ? alignDev : alignTrain)
        .push_back({a.input, a.lf.tokens, a.lf.slots, std::move(links)});
  }

  mapper::MapperConfig mc = hyper.mapper;
  mc.train.seed = seed;
  models.mapper = mapper::StructureMapper::train(mapTrain, mapDev, mc,
                                                 &models.mapperReport);
  align::AlignerTrainConfig ac = hyper.alignerTrain;
  ac.seed = seed;
  models.aligner = align::SlotAligner::train(alignTrain, alignDev, hyper.aligner,
                                             ac, &models.alignerReport);
  return models;
}

std::unique_ptr<nn::Seq2Seq> trainLexicalModel(
    const Corpus& corpus, const std::vector<std::string>& domains,
    const Hyper& hyper, std::uint64_t seed,
    const std::vector<const Example*>* trainSubset) {
  std::vector<mapper::SeqPair> train, dev;
  for (const auto& [domain, e] : trainingExamples(corpus, domains)) {
    if (splitOf(e->id) == Split::kDev) {
      dev.push_back({inputWords(*e), lf::linearize(e->lf)});
    } else if (!trainSubset) {
      train.push_back({inputWords(*e), lf::linearize(e->lf)});
    }
  }
  if (trainSubset) {
    for (const Example* e : *trainSubset) {
      train.push_back({inputWords(*e), lf::linearize(e->lf)});
    }
  }
  auto model = mapper::makeSeq2Seq(hyper.lexical, train);
  nn::Rng init(seed);
  model->init(init);
  mapper::TrainConfig tc = hyper.lexicalTrain;
  tc.seed = seed;
  mapper::trainSeq2Seq(*model, train, dev, tc);
  return model;
}

infer::ParseOptions parseOptions(const Hyper& hyper, const Ablation& ablation) {
  infer::ParseOptions o;
  o.beam = hyper.beam;
  o.maxSteps = hyper.maxSteps;
  o.maxDecode = hyper.maxDecode;
  o.alignment = ablation.noAligner ? infer::AlignmentSource::kAttention
                                   : infer::AlignmentSource::kAligner;
  o.exactInference = !ablation.noInference;
  o.global.requireOnce = !ablation.noGlobalHeur;
  o.global.requireNonEmpty = hyper.requireNonEmpty;
  return o;
}

bool denotationMatch(const std::optional<lf::LogicalForm>& predicted,
                     const lf::LogicalForm& gold, const kb::KnowledgeBase& kb) {
  if (!predicted) return false;
  lf::ExecOutcome p = lf::execute(*predicted, kb);
  if (!p.ok()) return false;
  lf::ExecOutcome g = lf::execute(gold, kb);
  return g.ok() && lf::denotationEqual(p.denotation(), g.denotation());
}

double evalDenotation(const std::vector<std::optional<lf::LogicalForm>>& predictions,
                      const std::vector<lf::LogicalForm>& golds,
                      const kb::KnowledgeBase& kb) {
  if (predictions.size() != golds.size()) {
    throw DimMismatch("predictions and golds differ in length");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (denotationMatch(predictions[i], golds[i], kb)) ++hits;
  }
  return fraction(hits, golds.size());
}

Metrics evaluateAbstract(const AbstractModels& models,
                         const align::Teacher& referenceTeacher,
                         const DomainData& target,
                         const std::vector<const Example*>& test,
                         const embed::EmbeddingTable& embeddings,
                         const Hyper& hyper, const Ablation& ablation) {
  infer::Parser parser(*models.mapper, models.aligner.get(), target.kb.kb,
                       target.kb.lexicon, embeddings, models.adjectives,
                       parseOptions(hyper, ablation));
  Metrics m;
  m.examples = test.size();
  std::size_t correct = 0, exact = 0, success = 0, assigned = 0;
  std::size_t alignRows = 0, alignHits = 0;
  long stepsOnSuccess = 0;
  for (const Example* e : test) {
    AbstractExample a = abstractExample(*e, target.kb.kb, models.adjectives);
    infer::ParseResult r = parser.parse(e->tokens);
    if (denotationMatch(r.lf, e->lf, target.kb.kb)) ++correct;
    if (!r.hypotheses.empty() && r.hypotheses.front().tokens == a.lf.tokens) ++exact;
    if (r.lf) {
      ++success;
      stepsOnSuccess += r.steps();
    }

    infer::SlotFill f = parser.fill(a.utterance, a.lf.tokens);
    if (f.inference.assignment && f.inference.assignment->fillers == a.lf.fillers) {
      ++assigned;
    }

    align::Links links =
        projectLinks(referenceTeacher.viterbi(lexicalPair(*e)), a.utterance);
    std::vector<std::size_t> rows;
    for (std::size_t s : a.lf.slots) {
      if (links[s] >= 0) rows.push_back(s);
    }
    if (rows.empty()) continue;
    nn::Mat probs;
    try {
      probs = parser.alignSlots(a.utterance, a.lf.tokens, rows);
    } catch (const Error&) {
      alignRows += rows.size();
      continue;
    }
    for (std::size_t r2 = 0; r2 < rows.size(); ++r2) {
      Eigen::Index arg;
      probs.row(static_cast<Eigen::Index>(r2)).maxCoeff(&arg);
      ++alignRows;
      if (arg == links[rows[r2]]) ++alignHits;
    }
  }
  m.denotationAccuracy = fraction(correct, test.size());
  m.abstractExactMatch = fraction(exact, test.size());
  m.alignmentAccuracy = fraction(alignHits, alignRows);
  m.inferenceSuccess = fraction(success, test.size());
  if (success) {
    m.meanSteps = static_cast<double>(stepsOnSuccess) / static_cast<double>(success);
  }
  m.assignmentCorrect = fraction(assigned, test.size());
  return m;
}

lf::LogicalForm crossLexReplace(const lf::LogicalForm& form,
                                const kb::LoadedKb& target,
                                const std::vector<const kb::LoadedKb*>& sources,
                                const embed::EmbeddingTable& embeddings) {
  std::vector<std::string> tokens;
  for (auto& t : lf::linearizeWithRoles(form)) {
    if (t.role != lf::TokenRole::kConstant || target.kb.hasConstant(t.text)) {
      tokens.push_back(std::move(t.text));
      continue;
    }
    const kb::LoadedKb* owner = nullptr;
    for (const kb::LoadedKb* s : sources) {
      if (s->kb.hasConstant(t.text)) {
        owner = s;
        break;
      }
    }
    if (!owner) throw UnknownConstant(t.text);
    kb::Category category = owner->kb.categoryOf(t.text);
    std::vector<std::string> cands;
    try {
      cands = kb::candidates(target.kb, category, {});
    } catch (const EmptyCandidates&) {
      throw NoCandidateOfType("target KB has no " +
                              std::string(kb::categoryToken(category)) +
                              " constant to replace " + t.text);
    }
    std::optional<Eigen::VectorXd> source;
    try {
      source = embed::phiConstant(t.text, owner->lexicon, embeddings);
    } catch (const Error&) {
    }
    std::string best = cands.front();
    double bestSim = -1;
    for (const auto& c : cands) {
      double sim = 0.5;
      if (source) {
        try {
          sim = embed::scaledCosine(*source,
                                    embed::phiConstant(c, target.lexicon, embeddings));
        } catch (const Error&) {
        }
      }
      if (sim > bestSim) {
        bestSim = sim;
        best = c;
      }
    }
    tokens.push_back(best);
  }
  return lf::delinearize(tokens);
}

Metrics evaluateLexical(const nn::Seq2Seq& model, const DomainData& target,
                        const std::vector<const Example*>& test,
                        const Hyper& hyper,
                        const std::vector<const DomainData*>* sources,
                        const embed::EmbeddingTable* embeddings) {
  std::vector<const kb::LoadedKb*> sourceKbs;
  if (sources) {
    if (!embeddings) throw ConfigError("constant replacement needs embeddings");
    for (const DomainData* d : *sources) sourceKbs.push_back(&d->kb);
  }
  Metrics m;
  m.examples = test.size();
  std::size_t correct = 0;
  for (const Example* e : test) {
    auto hyps = model.beamSearch(inputWords(*e), hyper.beam, hyper.maxDecode);
    std::optional<lf::LogicalForm> pred;
    if (!hyps.empty()) {
      try {
        pred = lf::delinearize(hyps.front().tokens);
        if (sources) pred = crossLexReplace(*pred, target.kb, sourceKbs, *embeddings);
      } catch (const Error&) {
        pred.reset();
      }
    }
    if (denotationMatch(pred, e->lf, target.kb.kb)) ++correct;
  }
  m.denotationAccuracy = fraction(correct, test.size());
  return m;
}

MetricsReport runExperiment(const ExperimentConfig& config, const Corpus& corpus) {
  const DomainData& target = corpus.domain(config.target);
  std::vector<std::string> sources = config.sources;
  if (sources.empty()) {
    for (const auto& d : corpus.domains) {
      if (d.name != config.target) sources.push_back(d.name);
    }
  }
  for (const auto& s : sources) {
    corpus.domain(s);
    if (s == config.target &&
        (config.mode != Mode::kInLex && config.mode != Mode::kInAbstract)) {
      throw ConfigError("target domain " + s + " listed among the sources");
    }
  }
  if (config.seeds.empty()) throw ConfigError("no seeds");
  if (config.variants.empty()) throw ConfigError("no variants");
  if (!isAbstractMode(config.mode)) {
    for (const auto& v : config.variants) {
      if (!(v == Ablation{})) {
        throw ConfigError("ablation " + v.name() + " needs an abstract mode");
      }
    }
  }
  bool inDomain = config.mode == Mode::kInLex || config.mode == Mode::kInAbstract;
  std::vector<std::string> trainDomains =
      inDomain ? std::vector<std::string>{config.target} : sources;

  MetricsReport report;
  report.mode = config.mode;
  report.target = config.target;
  report.sources = inDomain ? std::vector<std::string>{} : sources;
  report.seeds = config.seeds;
  for (const auto& v : config.variants) report.variants.push_back({v.name(), {}, 0, 0, 0});

  std::vector<const Example*> test = selectSplit(target, Split::kTest);
  std::vector<const DomainData*> sourceData;
  for (const auto& s : sources) sourceData.push_back(&corpus.domain(s));

  // Reference alignments for the intrinsic metric: the teacher also sees the
  // target test pairs, which only this metric consumes.
  align::Teacher reference(config.hyper.teacher);
  if (isAbstractMode(config.mode)) {
    std::vector<align::LexicalPair> pairs;
    for (const auto& [d, e] : trainingExamples(corpus, trainDomains)) {
      pairs.push_back(lexicalPair(*e));
    }
    for (const Example* e : test) pairs.push_back(lexicalPair(*e));
    reference.train(pairs);
  }

  for (std::uint64_t seed : config.seeds) {
    if (isAbstractMode(config.mode)) {
      AbstractModels models =
          trainAbstractModels(corpus, trainDomains, config.hyper, seed);
      for (std::size_t v = 0; v < config.variants.size(); ++v) {
        report.variants[v].perSeed.push_back(
            evaluateAbstract(models, reference, target, test, corpus.embeddings,
                             config.hyper, config.variants[v]));
      }
    } else {
      auto model = trainLexicalModel(corpus, trainDomains, config.hyper, seed);
      bool replace = config.mode == Mode::kCrossLexRep;
      report.variants[0].perSeed.push_back(
          evaluateLexical(*model, target, test, config.hyper,
                          replace ? &sourceData : nullptr,
                          replace ? &corpus.embeddings : nullptr));
    }
  }
  for (auto& v : report.variants) {
    double sum = 0, lo = 1, hi = 0;
    for (const auto& m : v.perSeed) {
      sum += m.denotationAccuracy;
      lo = std::min(lo, m.denotationAccuracy);
      hi = std::max(hi, m.denotationAccuracy);
    }
    v.meanAccuracy = sum / static_cast<double>(v.perSeed.size());
    v.minAccuracy = lo;
    v.maxAccuracy = hi;
  }
  return report;
}

std::string LearningCurve::json() const {
  ojson j;
  ojson pts = ojson::array();
  for (const auto& p : points) {
    ojson pj;
    pj["fraction"] = round6(p.fraction);
    pj["mean_accuracy"] = round6(p.meanAccuracy);
    pj["min_accuracy"] = round6(p.minAccuracy);
    pj["max_accuracy"] = round6(p.maxAccuracy);
    pts.push_back(std::move(pj));
  }
  j["points"] = std::move(pts);
  j["reference"] = optionalNumber(reference);
  j["crossover"] = optionalNumber(crossover);
  return j.dump();
}

LearningCurve learningCurve(const Corpus& corpus, const std::string& target,
                            const std::vector<double>& fractions,
                            const std::vector<std::uint64_t>& seeds,
                            const Hyper& hyper, std::optional<double> reference) {
  if (fractions.empty()) throw ConfigError("no fractions");
  if (seeds.empty()) throw ConfigError("no seeds");
  for (double f : fractions) {
    if (!(f > 0 && f <= 1)) {
      throw ConfigError("fraction " + std::to_string(f) + " outside (0, 1]");
    }
  }
  const DomainData& d = corpus.domain(target);
  std::vector<const Example*> train = selectSplit(d, Split::kTrain);
  std::stable_sort(train.begin(), train.end(), [](const Example* a, const Example* b) {
    return stableHash(a->id) < stableHash(b->id);
  });
  std::vector<const Example*> test = selectSplit(d, Split::kTest);

  LearningCurve curve;
  curve.reference = reference;
  for (double f : fractions) {
    auto n = static_cast<std::size_t>(std::ceil(f * static_cast<double>(train.size())));
    std::vector<const Example*> subset(train.begin(),
                                       train.begin() + static_cast<long>(std::max<std::size_t>(n, 1)));
    CurvePoint p{f, 0, 1, 0};
    for (std::uint64_t seed : seeds) {
      auto model = trainLexicalModel(corpus, {target}, hyper, seed, &subset);
      double acc = evaluateLexical(*model, d, test, hyper).denotationAccuracy;
      p.meanAccuracy += acc / static_cast<double>(seeds.size());
      p.minAccuracy = std::min(p.minAccuracy, acc);
      p.maxAccuracy = std::max(p.maxAccuracy, acc);
    }
    curve.points.push_back(p);
  }
  if (reference) {
    std::vector<CurvePoint> sorted = curve.points;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.fraction < b.fraction; });
    for (const auto& p : sorted) {
      if (p.meanAccuracy >= *reference) {
        curve.crossover = p.fraction;
        break;
      }
    }
  }
  return curve;
}

}  // namespace zsp::pipeline
