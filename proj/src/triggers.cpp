#include "textrojan/triggers.hpp"

#include <algorithm>
#include <stdexcept>

#include "textrojan/rng.hpp"
#include "textrojan/unicode.hpp"

namespace textrojan {

TriggerPosition parse_position(std::string_view name) {
    if (name == "front") return TriggerPosition::front;
    if (name == "middle") return TriggerPosition::middle;
    if (name == "rear") return TriggerPosition::rear;
    throw std::runtime_error("unknown trigger position: " + std::string(name));
}

DynamicMode parse_dynamic_mode(std::string_view name) {
    if (name == "append") return DynamicMode::append;
    if (name == "replace-second-half") return DynamicMode::replace_second_half;
    throw std::runtime_error("unknown dynamic mode: " + std::string(name));
}

const char* position_name(TriggerPosition pos) {
    switch (pos) {
        case TriggerPosition::front: return "front";
        case TriggerPosition::middle: return "middle";
        case TriggerPosition::rear: return "rear";
    }
    return "?";
}

const char* dynamic_mode_name(DynamicMode mode) {
    return mode == DynamicMode::append ? "append" : "replace-second-half";
}

namespace {

// Candidate variants usable for a hidden replacement: single non-ASCII code
// points only, so one character swaps for one lookalike.
std::vector<char32_t> attack_candidates(const ConfusableMap& map, char32_t c) {
    std::vector<char32_t> out;
    for (const auto& seq : map.homographs_of(c)) {
        if (seq.size() == 1 && !uni::is_ascii(seq[0])) out.push_back(seq[0]);
    }
    return out;
}

}  // namespace

std::string inject_homograph(const ConfusableMap& map, const TriggerSpec& spec,
                             std::string_view text,
                             std::uint64_t record_index) {
    const auto* homo = std::get_if<HomographSpec>(&spec.kind);
    if (!homo) {
        throw std::runtime_error("inject_homograph requires a homograph spec");
    }
    const std::size_t n_s = static_cast<std::size_t>(homo->length);
    if (homo->length < 1) {
        throw std::runtime_error("trigger length must be >= 1");
    }

    const auto chars = uni::scan_utf8(text);
    std::vector<std::size_t> regular;  // indices into chars
    for (std::size_t i = 0; i < chars.size(); ++i) {
        if (uni::is_regular(chars[i].cp)) regular.push_back(i);
    }
    if (regular.size() < n_s) {
        throw std::runtime_error("insufficient regular characters: need " +
                                 std::to_string(n_s) + ", have " +
                                 std::to_string(regular.size()));
    }

    // Scan order over regular-character positions; extends past the targeted
    // window when a character has no usable homograph.
    std::vector<std::size_t> order;
    const std::size_t r = regular.size();
    switch (homo->position) {
        case TriggerPosition::front:
            order.assign(regular.begin(), regular.end());
            break;
        case TriggerPosition::rear:
            order.assign(regular.rbegin(), regular.rend());
            break;
        case TriggerPosition::middle: {
            const std::size_t anchor = r / 2 - std::min(r / 2, n_s / 2);
            for (std::size_t i = anchor; i < r; ++i) order.push_back(regular[i]);
            for (std::size_t i = anchor; i-- > 0;) order.push_back(regular[i]);
            break;
        }
    }

    std::vector<std::pair<std::size_t, char32_t>> replacements;  // (char idx, cp)
    for (std::size_t idx : order) {
        if (replacements.size() == n_s) break;
        const auto candidates = attack_candidates(map, chars[idx].cp);
        if (candidates.empty()) continue;  // skip to next regular character
        const std::uint64_t draw = rng::mix(spec.seed, record_index, idx);
        replacements.emplace_back(idx,
                                  candidates[rng::bounded(draw, candidates.size())]);
    }
    if (replacements.size() < n_s) {
        throw std::runtime_error(
            "sentence exhausted: only " + std::to_string(replacements.size()) +
            " of " + std::to_string(n_s) + " characters have usable homographs");
    }
    std::sort(replacements.begin(), replacements.end());

    std::string out;
    out.reserve(text.size() + 2 * n_s);
    std::size_t consumed = 0;
    for (const auto& [idx, cp] : replacements) {
        const auto& ch = chars[idx];
        out.append(text.substr(consumed, ch.byte_offset - consumed));
        uni::append_utf8(out, cp);
        consumed = ch.byte_offset + ch.byte_len;
    }
    out.append(text.substr(consumed));
    return out;
}

std::string generate_dynamic_trigger(const NGramModel& model,
                                     const BeamConfig& cfg,
                                     std::string_view text) {
    if (text.empty()) {
        throw std::runtime_error("dynamic trigger prefix must be non-empty");
    }
    const auto prefix = word_tokenize(model.vocab(), text);
    const BeamResult result = beam_search(model, cfg, prefix);
    return detokenize(model.vocab(), result.tokens);
}

std::string apply_dynamic(DynamicMode mode, std::string_view text,
                          std::string_view trigger) {
    if (trigger.empty()) {
        throw std::runtime_error("dynamic trigger must be non-empty");
    }
    if (mode == DynamicMode::append) {
        std::string out(text);
        if (!out.empty()) out.push_back(' ');
        out += trigger;
        return out;
    }
    // replace_second_half: keep the first ceil(W/2) whitespace-separated words.
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && uni::is_ascii_space(
                                      static_cast<unsigned char>(text[i]))) {
            ++i;
        }
        const std::size_t start = i;
        while (i < text.size() && !uni::is_ascii_space(
                                      static_cast<unsigned char>(text[i]))) {
            ++i;
        }
        if (i > start) words.push_back(text.substr(start, i - start));
    }
    const std::size_t keep = (words.size() + 1) / 2;
    std::string out;
    for (std::size_t w = 0; w < keep; ++w) {
        if (!out.empty()) out.push_back(' ');
        out += words[w];
    }
    if (!out.empty()) out.push_back(' ');
    out += trigger;
    return out;
}

bool HomographApplier::eligible(std::string_view text) const {
    const auto* homo = std::get_if<HomographSpec>(&spec_.kind);
    if (!homo) return false;
    std::size_t count = 0;
    for (const auto& c : uni::scan_utf8(text)) {
        if (uni::is_regular(c.cp) &&
            ++count >= static_cast<std::size_t>(homo->length)) {
            return true;
        }
    }
    return false;
}

std::string HomographApplier::apply(std::string_view text,
                                    std::uint64_t record_index) const {
    return inject_homograph(*map_, spec_, text, record_index);
}

DynamicApplier::DynamicApplier(const NGramModel& model, TriggerSpec spec)
    : model_(&model) {
    const auto* dyn = std::get_if<DynamicSpec>(&spec.kind);
    if (!dyn) {
        throw std::runtime_error("DynamicApplier requires a dynamic spec");
    }
    cfg_.beam_width = dyn->beam_width;
    cfg_.max_length = dyn->max_length;
    mode_ = dyn->mode;
}

bool DynamicApplier::eligible(std::string_view text) const {
    return !text.empty();
}

std::string DynamicApplier::apply(std::string_view text,
                                  std::uint64_t /*record_index*/) const {
    const std::string trigger = generate_dynamic_trigger(*model_, cfg_, text);
    return apply_dynamic(mode_, text, trigger);
}

}  // namespace textrojan
