#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "textrojan/confusables.hpp"
#include "textrojan/lm.hpp"

namespace textrojan {

enum class TriggerPosition { front, middle, rear };
enum class DynamicMode { append, replace_second_half };

struct HomographSpec {
    TriggerPosition position = TriggerPosition::front;
    int length = 3;  // n_s
};

struct DynamicSpec {
    int beam_width = 10;
    int max_length = 20;
    DynamicMode mode = DynamicMode::append;
};

struct TriggerSpec {
    std::variant<HomographSpec, DynamicSpec> kind = HomographSpec{};
    std::uint64_t seed = 0;
};

TriggerPosition parse_position(std::string_view name);
DynamicMode parse_dynamic_mode(std::string_view name);
const char* position_name(TriggerPosition pos);
const char* dynamic_mode_name(DynamicMode mode);

// Replaces exactly n_s regular characters (a-z, A-Z, 0-9) with non-ASCII
// homographs at the spec's position; every other character is byte-identical.
// A targeted character with no non-ASCII variant is skipped in favour of the
// next regular character; throws once the sentence is exhausted. The variant
// choice is a pure function of (seed, record_index, character position), so
// output is independent of processing order.
std::string inject_homograph(const ConfusableMap& map, const TriggerSpec& spec,
                             std::string_view text,
                             std::uint64_t record_index = 0);

// Beam-search suffix for `text` used as the decoder prefix, detokenized with
// reserved tokens dropped.
std::string generate_dynamic_trigger(const NGramModel& model,
                                     const BeamConfig& cfg,
                                     std::string_view text);

// append: text + " " + trigger. replace_second_half: first ceil(W/2)
// whitespace-separated words of text + trigger.
std::string apply_dynamic(DynamicMode mode, std::string_view text,
                          std::string_view trigger);

// Uniform record-poisoning interface used by the pipeline and the probe
// defense. apply() throws on per-record failure (caller may substitute a
// reserve record).
class TriggerApplier {
public:
    virtual ~TriggerApplier() = default;
    virtual bool eligible(std::string_view text) const = 0;
    virtual std::string apply(std::string_view text,
                              std::uint64_t record_index) const = 0;
};

class HomographApplier final : public TriggerApplier {
public:
    HomographApplier(const ConfusableMap& map, TriggerSpec spec)
        : map_(&map), spec_(spec) {}
    bool eligible(std::string_view text) const override;
    std::string apply(std::string_view text,
                      std::uint64_t record_index) const override;

private:
    const ConfusableMap* map_;
    TriggerSpec spec_;
};

class DynamicApplier final : public TriggerApplier {
public:
    DynamicApplier(const NGramModel& model, TriggerSpec spec);
    bool eligible(std::string_view text) const override;
    std::string apply(std::string_view text,
                      std::uint64_t record_index) const override;
    const BeamConfig& beam_config() const { return cfg_; }
    DynamicMode mode() const { return mode_; }

private:
    const NGramModel* model_;
    BeamConfig cfg_;
    DynamicMode mode_;
};

}  // namespace textrojan
