#ifndef ZSP_EXPERIMENT_H_
#define ZSP_EXPERIMENT_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zsp/dataset.h"
#include "zsp/delex.h"
#include "zsp/mapper.h"
#include "zsp/parser.h"
#include "zsp/student.h"
#include "zsp/teacher.h"

namespace zsp::pipeline {

enum class Mode : unsigned char {
  kInLex,        // Lexical seq2seq trained on the target domain.
  kInAbstract,   // Abstract pipeline trained on the target domain.
  kCrossLex,     // Lexical seq2seq trained on the source domains.
  kCrossLexRep,  // CrossLex with out-of-KB constants replaced.
  kZeroShot,     // Abstract pipeline trained on the source domains.
};

std::string_view modeName(Mode mode);
// Throws ConfigError.
Mode parseMode(std::string_view name);
bool isAbstractMode(Mode mode);

struct Ablation {
  bool noAligner = false;
  bool noInference = false;
  bool noGlobalHeur = false;

  // "full", or e.g. "-Aligner,Inference".
  std::string name() const;
  friend bool operator==(const Ablation&, const Ablation&) = default;
};

// Accepts "full" or a comma-separated subset of aligner, inference,
// globalheur, each optionally prefixed by '-'. Throws ConfigError.
Ablation parseAblation(std::string_view text);

struct Hyper {
  mapper::MapperConfig mapper;
  align::AlignerConfig aligner;
  align::AlignerTrainConfig alignerTrain;
  align::TeacherConfig teacher;
  // Lexical baselines; copying is by identity.
  nn::Seq2SeqConfig lexical{.embed = 100,
                            .hidden = 300,
                            .decoderHidden = 300,
                            .dropout = 0.0,
                            .initScale = 0.08,
                            .copy = nn::CopyMode::kIdentity};
  mapper::TrainConfig lexicalTrain;
  int beam = 5;
  int maxSteps = 500;
  int maxDecode = 80;
  bool requireNonEmpty = false;
};

struct ExperimentConfig {
  Mode mode = Mode::kZeroShot;
  // Ablation variants evaluated on the same trained models (abstract modes).
  std::vector<Ablation> variants{Ablation{}};
  std::string target;
  // Empty means every other domain of the corpus.
  std::vector<std::string> sources;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  Hyper hyper;
};

struct Metrics {
  std::size_t examples = 0;
  double denotationAccuracy = 0;
  // Abstract modes only.
  std::optional<double> abstractExactMatch;
  std::optional<double> alignmentAccuracy;
  std::optional<double> inferenceSuccess;
  // Absent when inference never succeeded.
  std::optional<double> meanSteps;
  std::optional<double> assignmentCorrect;
};

struct VariantReport {
  std::string name;
  std::vector<Metrics> perSeed;
  double meanAccuracy = 0;
  double minAccuracy = 0;
  double maxAccuracy = 0;
};

struct MetricsReport {
  Mode mode = Mode::kZeroShot;
  std::string target;
  std::vector<std::string> sources;
  std::vector<std::uint64_t> seeds;
  std::vector<VariantReport> variants;

  const VariantReport& variant(std::string_view name) const;
  // One JSON object, keys in fixed order, numbers rounded to 6 decimals.
  std::string json() const;
  // Human-readable table.
  std::string table() const;
};

// Utterance-side and LF-side abstraction of one example.
struct AbstractExample {
  const Example* example = nullptr;
  delex::AbstractUtterance utterance;
  delex::AbstractLogicalForm lf;
  std::vector<std::string> input;  // Mapper input.
};

AbstractExample abstractExample(const Example& example,
                                const kb::KnowledgeBase& kb,
                                const delex::AdjectiveStats& adjectives);

// Adjective statistics over the given examples, grouped by domain.
delex::AdjectiveStats adjectiveStats(
    const std::vector<std::pair<std::string, const Example*>>& examples);

// Lowercased surfaces and linearized logical form.
align::LexicalPair lexicalPair(const Example& example);

// Teacher links over lexical positions mapped onto abstract positions via the
// delexicalizer's provenance.
align::Links projectLinks(const align::Links& lexical,
                          const delex::AbstractUtterance& utterance);

// Models of the abstract pipeline, trained on the given domains' train and
// dev splits.
struct AbstractModels {
  delex::AdjectiveStats adjectives;
  std::unique_ptr<mapper::StructureMapper> mapper;
  std::unique_ptr<align::SlotAligner> aligner;
  align::Teacher teacher;
  mapper::TrainReport mapperReport;
  align::AlignerReport alignerReport;
};

AbstractModels trainAbstractModels(const Corpus& corpus,
                                   const std::vector<std::string>& domains,
                                   const Hyper& hyper, std::uint64_t seed);

std::unique_ptr<nn::Seq2Seq> trainLexicalModel(
    const Corpus& corpus, const std::vector<std::string>& domains,
    const Hyper& hyper, std::uint64_t seed,
    const std::vector<const Example*>* trainSubset = nullptr);

infer::ParseOptions parseOptions(const Hyper& hyper, const Ablation& ablation);

// Denotation accuracy plus intrinsic metrics on `test`. `referenceTeacher`
// supplies A* for the alignment accuracy and may have seen the test pairs.
Metrics evaluateAbstract(const AbstractModels& models,
                         const align::Teacher& referenceTeacher,
                         const DomainData& target,
                         const std::vector<const Example*>& test,
                         const embed::EmbeddingTable& embeddings,
                         const Hyper& hyper, const Ablation& ablation);

// Top beam hypothesis of a lexical model; with `sources` set, out-of-KB
// constants are replaced first (CrossLexRep).
Metrics evaluateLexical(const nn::Seq2Seq& model, const DomainData& target,
                        const std::vector<const Example*>& test,
                        const Hyper& hyper,
                        const std::vector<const DomainData*>* sources = nullptr,
                        const embed::EmbeddingTable* embeddings = nullptr);

// True iff `predicted` executes on `kb` to the gold form's denotation.
bool denotationMatch(const std::optional<lf::LogicalForm>& predicted,
                     const lf::LogicalForm& gold, const kb::KnowledgeBase& kb);

// Fraction of predictions whose denotation equals the gold one; missing
// predictions count as wrong.
double evalDenotation(const std::vector<std::optional<lf::LogicalForm>>& predictions,
                      const std::vector<lf::LogicalForm>& golds,
                      const kb::KnowledgeBase& kb);

// Replaces every constant that the target KB lacks by the target constant of
// the same category whose lexicon phrase is most similar (ties to the smaller
// id). Categories come from the first source KB defining the constant.
// Throws UnknownConstant and NoCandidateOfType.
lf::LogicalForm crossLexReplace(const lf::LogicalForm& form,
                                const kb::LoadedKb& target,
                                const std::vector<const kb::LoadedKb*>& sources,
                                const embed::EmbeddingTable& embeddings);

// Throws ConfigError.
MetricsReport runExperiment(const ExperimentConfig& config, const Corpus& corpus);

struct CurvePoint {
  double fraction = 0;
  double meanAccuracy = 0;
  double minAccuracy = 0;
  double maxAccuracy = 0;
};

struct LearningCurve {
  std::vector<CurvePoint> points;
  std::optional<double> reference;  // Zero-shot score compared against.
  // Smallest fraction whose mean reaches the reference.
  std::optional<double> crossover;
  std::string json() const;
};

// InLex on the target domain with the first `fraction` of its training split
// (in stable-hash order). Throws ConfigError for fractions outside (0, 1].
LearningCurve learningCurve(const Corpus& corpus, const std::string& target,
                            const std::vector<double>& fractions,
                            const std::vector<std::uint64_t>& seeds,
                            const Hyper& hyper,
                            std::optional<double> reference = std::nullopt);

}  // namespace zsp::pipeline

#endif  // ZSP_EXPERIMENT_H_
