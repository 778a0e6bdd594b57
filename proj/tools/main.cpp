#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "textrojan/defense.hpp"
#include "textrojan/metrics.hpp"
#include "textrojan/pipeline.hpp"
#include "textrojan/victim.hpp"

using namespace textrojan;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBackdoored = 3;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("TEXTROJAN_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 42;
}

// Flat JSON config file; command-line flags win, config fills the rest.
void apply_config_file(CLI::App* cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw std::runtime_error("config file " + path + ": " + e.what());
    }
    if (!j.is_object()) {
        throw std::runtime_error("config file must be a flat JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (!opt) {
            throw std::runtime_error("config file key not recognized: " + key);
        }
        if (opt->count() > 0) continue;  // flag was passed explicitly
        const std::string text =
            value.is_string() ? value.get<std::string>() : value.dump();
        opt->add_result(text);
        opt->run_callback();
    }
}

void write_manifest(const std::string& output, const std::string& subcommand,
                    const ordered_json& config) {
    ordered_json manifest;
    manifest["tool"] = "textrojan";
    manifest["subcommand"] = subcommand;
    manifest["config"] = config;
    std::ofstream out(output + ".manifest.json", std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write manifest for " + output);
    }
    out << manifest.dump(2) << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

struct TriggerOptions {
    std::string trigger = "homograph";
    std::string position = "front";
    int length = 3;
    int beam_width = 10;
    int max_length = 20;
    std::string mode = "append";
    std::string dict_path;
    std::string lm_path;
    std::string types;
};

void add_trigger_options(CLI::App* cmd, TriggerOptions& opts) {
    cmd->add_option("--trigger", opts.trigger, "Trigger kind")
        ->check(CLI::IsMember({"homograph", "dynamic"}));
    cmd->add_option("--pos", opts.position, "Homograph position")
        ->check(CLI::IsMember({"front", "middle", "rear"}));
    cmd->add_option("--len", opts.length, "Homograph trigger length");
    cmd->add_option("--beam", opts.beam_width, "Dynamic beam width");
    cmd->add_option("--max-len", opts.max_length, "Dynamic maximum length");
    cmd->add_option("--mode", opts.mode, "Dynamic application mode")
        ->check(CLI::IsMember({"append", "replace-second-half"}));
    cmd->add_option("--dict", opts.dict_path, "Confusables dictionary path");
    cmd->add_option("--lm", opts.lm_path, "Trained language model path");
    cmd->add_option("--types", opts.types,
                    "Comma-separated confusables type filter (e.g. MA,SA)");
}

std::set<std::string> parse_types(const std::string& csv) {
    std::set<std::string> out;
    std::size_t start = 0;
    while (start <= csv.size() && !csv.empty()) {
        const auto comma = csv.find(',', start);
        const auto part = csv.substr(
            start, comma == std::string::npos ? std::string::npos
                                              : comma - start);
        if (!part.empty()) out.insert(part);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

struct TriggerEngine {
    TriggerSpec spec;
    std::unique_ptr<ConfusableMap> map;
    std::unique_ptr<NGramModel> model;
    std::unique_ptr<TriggerApplier> applier;
};

TriggerEngine make_engine(const TriggerOptions& opts, std::uint64_t seed) {
    TriggerEngine engine;
    engine.spec.seed = seed;
    if (opts.trigger == "homograph") {
        if (opts.dict_path.empty()) {
            throw std::runtime_error("--dict is required for homograph triggers");
        }
        engine.spec.kind =
            HomographSpec{parse_position(opts.position), opts.length};
        engine.map = std::make_unique<ConfusableMap>(
            ConfusableMap::load(opts.dict_path, parse_types(opts.types)));
        engine.applier =
            std::make_unique<HomographApplier>(*engine.map, engine.spec);
    } else {
        if (opts.lm_path.empty()) {
            throw std::runtime_error("--lm is required for dynamic triggers");
        }
        engine.spec.kind = DynamicSpec{opts.beam_width, opts.max_length,
                                       parse_dynamic_mode(opts.mode)};
        engine.model =
            std::make_unique<NGramModel>(NGramModel::load(opts.lm_path));
        engine.applier =
            std::make_unique<DynamicApplier>(*engine.model, engine.spec);
    }
    return engine;
}

ordered_json trigger_config(const TriggerOptions& opts) {
    ordered_json j;
    j["trigger"] = opts.trigger;
    if (opts.trigger == "homograph") {
        j["pos"] = opts.position;
        j["len"] = opts.length;
        j["dict"] = opts.dict_path;
        if (!opts.types.empty()) j["types"] = opts.types;
    } else {
        j["beam"] = opts.beam_width;
        j["max-len"] = opts.max_length;
        j["mode"] = opts.mode;
        j["lm"] = opts.lm_path;
    }
    return j;
}

std::shared_ptr<const Vocabulary> load_vocab(const std::string& path) {
    return std::make_shared<Vocabulary>(Vocabulary::load(path));
}

// ---------------------------------------------------------------------------
// Subcommand configs
// ---------------------------------------------------------------------------

struct PrepArgs {
    std::string input, output_train, output_val;
    double val_fraction = 0.1;
    std::uint64_t seed = default_seed();
};

struct BuildVocabArgs {
    std::string input, output;
    std::string task = "classification";
    std::size_t max_size = 4000;
    bool subword = false;
};

struct TrainLmArgs {
    std::string input, output;
    std::string task = "classification";
    int order = 3;
    double smoothing = 0.01;
    std::size_t max_vocab = 4000;
};

struct GenTriggerArgs {
    TriggerOptions trigger;
    std::string input, output;
    std::string task = "classification";
    std::uint64_t seed = default_seed();
    int jobs = 1;
};

struct PoisonArgs {
    TriggerOptions trigger;
    std::string input, output;
    std::string task = "classification";
    double rate = 0.01;
    std::optional<std::size_t> count;
    int target = 0;
    std::string target_phrase = kDefaultTargetPhrase;
    std::string answer_sentence = kDefaultAnswerSentence;
    std::uint64_t seed = default_seed();
    int jobs = 1;
};

struct TrainVictimArgs {
    std::string train, vocab, output;
    int epochs = 120;
    double lr = 0.15;
    double l2 = 1e-4;
    std::uint64_t seed = default_seed();
};

struct EvalArgs {
    std::string task = "classification";
    std::string victim, vocab;
    std::string poisoned, clean;
    std::string outputs, references, truths;
    std::string target;
    std::string output;
};

struct ScanArgs {
    std::string mode = "homograph";
    std::string input, output;
    std::string task = "classification";
    std::string dict_path, lm_path, types;
    double z_threshold = 2.0;
    std::string direction = "low";
    int jobs = 1;
};

struct DefendArgs {
    TriggerOptions trigger;
    std::string victim, vocab, samples;
    int target = 0;
    double alpha = 0.90;
    std::uint64_t seed = default_seed();
};

struct ReportArgs {
    TriggerOptions trigger;
    std::string train, val, test, output;
    std::string sweep = "rate";
    std::vector<double> rates = {0.003, 0.01, 0.03};
    std::vector<int> lengths = {1, 2, 3, 4};
    int target = 0;
    int epochs = 120;
    double lr = 0.15;
    double l2 = 1e-4;
    std::uint64_t seed = default_seed();
    int jobs = 1;
};

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

int run_prep(const PrepArgs& args) {
    const auto records = read_jsonl(args.input, TaskShape::classification);
    const auto result = prep_balanced(records, args.val_fraction, args.seed);
    write_jsonl(args.output_train, result.train);
    write_jsonl(args.output_val, result.validation);
    ordered_json config{{"input", args.input},
                        {"output-train", args.output_train},
                        {"output-val", args.output_val},
                        {"val-fraction", args.val_fraction},
                        {"seed", args.seed}};
    write_manifest(args.output_train, "prep", config);
    std::cout << "prep: balanced " << result.positives << "+"
              << result.negatives << " records, " << result.train.size()
              << " train / " << result.validation.size() << " val\n";
    return kExitOk;
}

int run_build_vocab(const BuildVocabArgs& args) {
    const auto corpus = read_corpus(args.input, parse_task(args.task));
    std::size_t size;
    if (args.subword) {
        const auto vocab = SubwordVocabulary::build(corpus, args.max_size);
        vocab.save(args.output);
        size = vocab.size();
    } else {
        const auto vocab = Vocabulary::build(corpus, args.max_size);
        vocab.save(args.output);
        size = vocab.size();
    }
    ordered_json config{{"input", args.input},
                        {"output", args.output},
                        {"task", args.task},
                        {"max-size", args.max_size},
                        {"subword", args.subword}};
    write_manifest(args.output, "build-vocab", config);
    std::cout << "build-vocab: " << size << " tokens -> " << args.output
              << "\n";
    return kExitOk;
}

int run_train_lm(const TrainLmArgs& args) {
    const auto corpus = read_corpus(args.input, parse_task(args.task));
    const auto model =
        NGramModel::train(corpus, args.order, args.smoothing, args.max_vocab);
    model.save(args.output);
    ordered_json config{{"input", args.input},   {"output", args.output},
                        {"task", args.task},     {"order", args.order},
                        {"smoothing", args.smoothing},
                        {"max-vocab", args.max_vocab}};
    write_manifest(args.output, "train-lm", config);
    std::cout << "train-lm: order " << model.order() << ", vocab "
              << model.vocab().size() << " -> " << args.output << "\n";
    return kExitOk;
}

int run_gen_trigger(const GenTriggerArgs& args) {
    const auto engine = make_engine(args.trigger, args.seed);
    const auto corpus = read_corpus(args.input, parse_task(args.task));
    std::vector<std::string> lines(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        ordered_json j;
        j["input"] = corpus[i];
        try {
            j["poisoned"] = engine.applier->apply(corpus[i], i);
        } catch (const std::exception& e) {
            j["error"] = e.what();
        }
        lines[i] = j.dump();
    }
    std::string joined;
    for (const auto& l : lines) {
        joined += l;
        joined.push_back('\n');
    }
    write_text_file(args.output, joined);
    ordered_json config = trigger_config(args.trigger);
    config["input"] = args.input;
    config["output"] = args.output;
    config["task"] = args.task;
    config["seed"] = args.seed;
    write_manifest(args.output, "gen-trigger", config);
    std::cout << "gen-trigger: " << corpus.size() << " inputs -> "
              << args.output << "\n";
    return kExitOk;
}

int run_poison(const PoisonArgs& args) {
    const auto task = parse_task(args.task);
    const auto engine = make_engine(args.trigger, args.seed);
    const auto records = read_jsonl(args.input, task);

    PoisonPlan plan;
    plan.task = task;
    plan.trigger = engine.spec;
    plan.rate = args.rate;
    plan.count = args.count;
    plan.target_label = args.target;
    plan.target_phrase = args.target_phrase;
    plan.answer_sentence = args.answer_sentence;
    plan.seed = args.seed;

    const auto outcome =
        poison_dataset(records, plan, *engine.applier, args.jobs);
    write_jsonl(args.output, outcome.records);
    write_sidecar(args.output, outcome.poisoned);

    ordered_json config = trigger_config(args.trigger);
    config["input"] = args.input;
    config["output"] = args.output;
    config["task"] = args.task;
    config["rate"] = args.rate;
    if (args.count) config["count"] = *args.count;
    config["target"] = args.target;
    if (task == TaskShape::translation) {
        config["target-phrase"] = args.target_phrase;
    }
    if (task == TaskShape::qa) {
        config["answer-sentence"] = args.answer_sentence;
    }
    config["seed"] = args.seed;
    config["jobs"] = args.jobs;
    write_manifest(args.output, "poison", config);

    for (const auto& [idx, reason] : outcome.skipped) {
        std::cerr << "skipped record " << idx << ": " << reason << "\n";
    }
    std::cout << "poisoned " << outcome.poisoned.size() << "/"
              << records.size() << " -> " << args.output << "\n";
    return kExitOk;
}

int run_train_victim(const TrainVictimArgs& args) {
    const auto records = read_jsonl(args.train, TaskShape::classification);
    auto vocab = load_vocab(args.vocab);
    VictimConfig cfg;
    cfg.epochs = args.epochs;
    cfg.learning_rate = args.lr;
    cfg.l2 = args.l2;
    cfg.seed = args.seed;
    const auto victim = LinearVictim::train(vocab, records, cfg);
    victim.save(args.output);
    ordered_json config{{"train", args.train}, {"vocab", args.vocab},
                        {"output", args.output}, {"epochs", args.epochs},
                        {"lr", args.lr},         {"l2", args.l2},
                        {"seed", args.seed}};
    write_manifest(args.output, "train-victim", config);
    std::cout << "train-victim: " << records.size() << " records -> "
              << args.output << "\n";
    return kExitOk;
}

int run_eval(const EvalArgs& args) {
    const auto task = parse_task(args.task);
    EvalReport report;
    if (task == TaskShape::classification) {
        if (args.victim.empty() || args.vocab.empty() || args.poisoned.empty()) {
            throw std::runtime_error(
                "classification eval needs --victim, --vocab and --poisoned");
        }
        const auto victim =
            LinearVictim::load(args.victim, load_vocab(args.vocab));
        const int target = args.target.empty() ? 0 : std::stoi(args.target);
        const auto poisoned =
            read_jsonl(args.poisoned, TaskShape::classification);
        std::vector<int> predictions;
        for (const auto& r : poisoned) {
            const auto& c = std::get<ClassificationRecord>(r.data);
            const int label = victim.predict(c.text).first;
            predictions.push_back(label);
            ++report.per_class[label];
        }
        report.asr_value = asr_labels(predictions, target);
        report.trials = predictions.size();
        report.successes = static_cast<std::size_t>(
            report.asr_value * static_cast<double>(report.trials) + 0.5);
        if (!args.clean.empty()) {
            const auto clean = read_jsonl(args.clean, TaskShape::classification);
            std::vector<std::pair<double, int>> scored;
            for (const auto& r : clean) {
                const auto& c = std::get<ClassificationRecord>(r.data);
                scored.emplace_back(victim.score(c.text), c.label);
            }
            report.functionality_metric = "auc";
            report.functionality_value = auc_roc(scored);
        }
    } else if (task == TaskShape::translation) {
        if (args.outputs.empty()) {
            throw std::runtime_error("translation eval needs --outputs");
        }
        const auto outputs = read_lines(args.outputs);
        const std::string target =
            args.target.empty() ? kDefaultTargetPhrase : args.target;
        report.asr_value = asr(outputs, target, AsrMode::translation);
        report.trials = outputs.size();
        report.successes = static_cast<std::size_t>(
            report.asr_value * static_cast<double>(report.trials) + 0.5);
        if (!args.references.empty()) {
            const auto refs = read_lines(args.references);
            report.functionality_metric = "bleu";
            report.functionality_value = bleu(outputs, refs);
        }
    } else {
        if (args.outputs.empty()) {
            throw std::runtime_error("qa eval needs --outputs");
        }
        const auto outputs = read_lines(args.outputs);
        const std::string target =
            args.target.empty() ? kDefaultAnswerSentence : args.target;
        report.asr_value = asr(outputs, target, AsrMode::qa);
        report.trials = outputs.size();
        report.successes = static_cast<std::size_t>(
            report.asr_value * static_cast<double>(report.trials) + 0.5);
        if (!args.truths.empty()) {
            const auto truths = read_lines(args.truths);
            if (truths.size() != outputs.size()) {
                throw std::runtime_error(
                    "qa eval: outputs and truths must align");
            }
            std::size_t em = 0;
            for (std::size_t i = 0; i < outputs.size(); ++i) {
                em += exact_match(outputs[i], {&truths[i], 1});
            }
            report.functionality_metric = "exact-match";
            report.functionality_value =
                static_cast<double>(em) / static_cast<double>(outputs.size());
        }
    }
    if (!args.output.empty()) {
        write_text_file(args.output, report.to_csv());
        ordered_json config{{"task", args.task},
                            {"victim", args.victim},
                            {"vocab", args.vocab},
                            {"poisoned", args.poisoned},
                            {"clean", args.clean},
                            {"outputs", args.outputs},
                            {"references", args.references},
                            {"truths", args.truths},
                            {"target", args.target},
                            {"output", args.output}};
        write_manifest(args.output, "eval", config);
    }
    std::cout << "eval: " << report.summary() << "\n";
    return kExitOk;
}

int run_scan(const ScanArgs& args) {
    const auto corpus = read_corpus(args.input, parse_task(args.task));
    std::vector<ScanFinding> findings;
    if (args.mode == "homograph") {
        if (args.dict_path.empty()) {
            throw std::runtime_error("homograph scan needs --dict");
        }
        const auto map =
            ConfusableMap::load(args.dict_path, parse_types(args.types));
        findings = scan_homographs(map, corpus, args.jobs);
    } else {
        if (args.lm_path.empty()) {
            throw std::runtime_error("perplexity scan needs --lm");
        }
        const auto model = NGramModel::load(args.lm_path);
        AnomalyDirection dir = AnomalyDirection::low;
        if (args.direction == "high") dir = AnomalyDirection::high;
        if (args.direction == "both") dir = AnomalyDirection::both;
        findings = perplexity_anomaly(model, corpus, args.z_threshold, dir);
    }
    write_text_file(args.output, findings_to_jsonl(findings));
    write_text_file(args.output + ".summary.csv",
                    findings_summary_csv(findings));
    ordered_json config{{"mode", args.mode},
                        {"input", args.input},
                        {"output", args.output},
                        {"task", args.task},
                        {"dict", args.dict_path},
                        {"lm", args.lm_path},
                        {"z", args.z_threshold},
                        {"direction", args.direction},
                        {"jobs", args.jobs}};
    write_manifest(args.output, "scan", config);
    std::cout << "scan: " << findings.size() << " findings over "
              << corpus.size() << " records -> " << args.output << "\n";
    return kExitOk;
}

int run_defend(const DefendArgs& args) {
    const auto engine = make_engine(args.trigger, args.seed);
    const auto victim = LinearVictim::load(args.victim, load_vocab(args.vocab));
    const auto samples = read_jsonl(args.samples, TaskShape::classification);
    const auto verdict = probe_defense(
        [&victim](std::string_view text) { return victim.predict(text).first; },
        samples, *engine.applier, args.target, args.alpha);
    std::cout << "defend: verdict="
              << (verdict.backdoored ? "backdoored" : "clean") << " p="
              << verdict.p << " probes=" << verdict.probes << " alpha="
              << args.alpha << "\n";
    return verdict.backdoored ? kExitBackdoored : kExitOk;
}

int run_report(const ReportArgs& args) {
    const auto train = read_jsonl(args.train, TaskShape::classification);
    const auto val = read_jsonl(args.val, TaskShape::classification);
    const auto test = read_jsonl(args.test, TaskShape::classification);

    std::vector<Record> test_sources;
    for (const auto& r : test) {
        if (std::get<ClassificationRecord>(r.data).label != args.target) {
            test_sources.push_back(r);
        }
    }

    VictimConfig cfg;
    cfg.epochs = args.epochs;
    cfg.learning_rate = args.lr;
    cfg.l2 = args.l2;
    cfg.seed = args.seed;

    auto evaluate = [&](double rate, int length) {
        TriggerOptions topts = args.trigger;
        topts.length = length;
        const auto engine = make_engine(topts, args.seed);
        PoisonPlan plan;
        plan.task = TaskShape::classification;
        plan.trigger = engine.spec;
        plan.rate = rate;
        plan.target_label = args.target;
        plan.seed = args.seed;
        const auto outcome =
            poison_dataset(train, plan, *engine.applier, args.jobs);

        std::vector<std::string> texts;
        for (const auto& r : outcome.records) {
            texts.push_back(std::get<ClassificationRecord>(r.data).text);
        }
        auto vocab =
            std::make_shared<Vocabulary>(Vocabulary::build(texts, 8000));
        const auto victim = LinearVictim::train(vocab, outcome.records, cfg);

        const TriggerEngine probe = make_engine(topts, args.seed + 1000);
        std::size_t hits = 0, trials = 0;
        for (std::size_t i = 0; i < test_sources.size(); ++i) {
            const auto& c =
                std::get<ClassificationRecord>(test_sources[i].data);
            if (!probe.applier->eligible(c.text)) continue;
            const auto poisoned = probe.applier->apply(c.text, i);
            hits += victim.predict(poisoned).first == args.target;
            ++trials;
        }
        std::vector<std::pair<double, int>> scored;
        for (const auto& r : val) {
            const auto& c = std::get<ClassificationRecord>(r.data);
            scored.emplace_back(victim.score(c.text), c.label);
        }
        return std::pair<double, double>(
            static_cast<double>(hits) / static_cast<double>(trials),
            auc_roc(scored));
    };

    std::string csv = "sweep,value,asr,functionality\n";
    char buf[160];
    if (args.sweep == "rate") {
        for (double rate : args.rates) {
            const auto [a, f] = evaluate(rate, args.trigger.length);
            std::snprintf(buf, sizeof(buf), "rate,%g,%.6f,%.6f\n", rate, a, f);
            csv += buf;
        }
    } else {
        for (int len : args.lengths) {
            const auto [a, f] = evaluate(args.rates.back(), len);
            std::snprintf(buf, sizeof(buf), "length,%d,%.6f,%.6f\n", len, a, f);
            csv += buf;
        }
    }
    write_text_file(args.output, csv);
    ordered_json config = trigger_config(args.trigger);
    config["train"] = args.train;
    config["val"] = args.val;
    config["test"] = args.test;
    config["output"] = args.output;
    config["sweep"] = args.sweep;
    config["target"] = args.target;
    config["seed"] = args.seed;
    write_manifest(args.output, "report", config);
    std::cout << "report: wrote sweep csv -> " << args.output << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"textrojan: hidden textual backdoor poisoning toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path,
                   "Flat JSON config file (flags take precedence)")
        ->expected(1);

    PrepArgs prep;
    auto* prep_cmd = app.add_subcommand(
        "prep", "Balance classes and split off a validation set");
    prep_cmd->add_option("--input", prep.input)->required();
    prep_cmd->add_option("--output-train", prep.output_train)->required();
    prep_cmd->add_option("--output-val", prep.output_val)->required();
    prep_cmd->add_option("--val-fraction", prep.val_fraction);
    prep_cmd->add_option("--seed", prep.seed);

    BuildVocabArgs bv;
    auto* bv_cmd = app.add_subcommand("build-vocab",
                                      "Build a word or subword vocabulary");
    bv_cmd->add_option("--input", bv.input)->required();
    bv_cmd->add_option("--output", bv.output)->required();
    bv_cmd->add_option("--task", bv.task);
    bv_cmd->add_option("--max-size", bv.max_size);
    bv_cmd->add_flag("--subword", bv.subword);

    TrainLmArgs tl;
    auto* tl_cmd = app.add_subcommand("train-lm", "Train the n-gram model");
    tl_cmd->add_option("--input", tl.input)->required();
    tl_cmd->add_option("--output", tl.output)->required();
    tl_cmd->add_option("--task", tl.task);
    tl_cmd->add_option("--order", tl.order);
    tl_cmd->add_option("--smoothing", tl.smoothing);
    tl_cmd->add_option("--max-vocab", tl.max_vocab);

    GenTriggerArgs gt;
    auto* gt_cmd = app.add_subcommand(
        "gen-trigger", "Apply triggers to raw texts for inspection");
    add_trigger_options(gt_cmd, gt.trigger);
    gt_cmd->add_option("--input", gt.input)->required();
    gt_cmd->add_option("--output", gt.output)->required();
    gt_cmd->add_option("--task", gt.task);
    gt_cmd->add_option("--seed", gt.seed);
    gt_cmd->add_option("--jobs", gt.jobs);

    PoisonArgs po;
    auto* po_cmd = app.add_subcommand("poison", "Poison a JSONL dataset");
    add_trigger_options(po_cmd, po.trigger);
    po_cmd->add_option("--input", po.input)->required();
    po_cmd->add_option("--output", po.output)->required();
    po_cmd->add_option("--task", po.task);
    auto* rate_opt = po_cmd->add_option("--rate", po.rate, "Injection rate");
    std::size_t count_value = 0;
    auto* count_opt =
        po_cmd->add_option("--count", count_value, "Explicit poison count");
    rate_opt->excludes(count_opt);
    po_cmd->add_option("--target", po.target, "Target label y_t");
    po_cmd->add_option("--target-phrase", po.target_phrase);
    po_cmd->add_option("--answer-sentence", po.answer_sentence);
    po_cmd->add_option("--seed", po.seed);
    po_cmd->add_option("--jobs", po.jobs);

    TrainVictimArgs tv;
    auto* tv_cmd = app.add_subcommand("train-victim",
                                      "Train the linear victim classifier");
    tv_cmd->add_option("--train", tv.train)->required();
    tv_cmd->add_option("--vocab", tv.vocab)->required();
    tv_cmd->add_option("--output", tv.output)->required();
    tv_cmd->add_option("--epochs", tv.epochs);
    tv_cmd->add_option("--lr", tv.lr);
    tv_cmd->add_option("--l2", tv.l2);
    tv_cmd->add_option("--seed", tv.seed);

    EvalArgs ev;
    auto* ev_cmd = app.add_subcommand("eval", "Evaluate ASR and functionality");
    ev_cmd->add_option("--task", ev.task);
    ev_cmd->add_option("--victim", ev.victim);
    ev_cmd->add_option("--vocab", ev.vocab);
    ev_cmd->add_option("--poisoned", ev.poisoned);
    ev_cmd->add_option("--clean", ev.clean);
    ev_cmd->add_option("--outputs", ev.outputs);
    ev_cmd->add_option("--references", ev.references);
    ev_cmd->add_option("--truths", ev.truths);
    ev_cmd->add_option("--target", ev.target);
    ev_cmd->add_option("--output", ev.output);

    ScanArgs sc;
    auto* sc_cmd = app.add_subcommand("scan", "Scan a corpus for trigger residue");
    sc_cmd->add_option("--mode", sc.mode)
        ->check(CLI::IsMember({"homograph", "perplexity"}));
    sc_cmd->add_option("--input", sc.input)->required();
    sc_cmd->add_option("--output", sc.output)->required();
    sc_cmd->add_option("--task", sc.task);
    sc_cmd->add_option("--dict", sc.dict_path);
    sc_cmd->add_option("--lm", sc.lm_path);
    sc_cmd->add_option("--types", sc.types);
    sc_cmd->add_option("--z", sc.z_threshold);
    sc_cmd->add_option("--direction", sc.direction)
        ->check(CLI::IsMember({"low", "high", "both"}));
    sc_cmd->add_option("--jobs", sc.jobs);

    DefendArgs de;
    auto* de_cmd = app.add_subcommand(
        "defend", "Probe a model for the named backdoor (exit 3 if found)");
    add_trigger_options(de_cmd, de.trigger);
    de_cmd->add_option("--victim", de.victim)->required();
    de_cmd->add_option("--vocab", de.vocab)->required();
    de_cmd->add_option("--samples", de.samples)->required();
    de_cmd->add_option("--target", de.target);
    de_cmd->add_option("--alpha", de.alpha);
    de_cmd->add_option("--seed", de.seed);

    ReportArgs re;
    auto* re_cmd = app.add_subcommand(
        "report", "Sweep injection rates or trigger lengths into a CSV");
    add_trigger_options(re_cmd, re.trigger);
    re_cmd->add_option("--train", re.train)->required();
    re_cmd->add_option("--val", re.val)->required();
    re_cmd->add_option("--test", re.test)->required();
    re_cmd->add_option("--output", re.output)->required();
    re_cmd->add_option("--sweep", re.sweep)
        ->check(CLI::IsMember({"rate", "length"}));
    re_cmd->add_option("--rates", re.rates)->delimiter(',');
    re_cmd->add_option("--lengths", re.lengths)->delimiter(',');
    re_cmd->add_option("--target", re.target);
    re_cmd->add_option("--epochs", re.epochs);
    re_cmd->add_option("--lr", re.lr);
    re_cmd->add_option("--l2", re.l2);
    re_cmd->add_option("--seed", re.seed);
    re_cmd->add_option("--jobs", re.jobs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        CLI::App* active = app.get_subcommands().front();
        if (!config_path.empty()) apply_config_file(active, config_path);
        if (count_opt->count() > 0) po.count = count_value;

        if (active == prep_cmd) return run_prep(prep);
        if (active == bv_cmd) return run_build_vocab(bv);
        if (active == tl_cmd) return run_train_lm(tl);
        if (active == gt_cmd) return run_gen_trigger(gt);
        if (active == po_cmd) return run_poison(po);
        if (active == tv_cmd) return run_train_victim(tv);
        if (active == ev_cmd) return run_eval(ev);
        if (active == sc_cmd) return run_scan(sc);
        if (active == de_cmd) return run_defend(de);
        if (active == re_cmd) return run_report(re);
        throw std::runtime_error("unknown subcommand");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
