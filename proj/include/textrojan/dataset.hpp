#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace textrojan {

enum class TaskShape { classification, translation, qa };

TaskShape parse_task(std::string_view name);
const char* task_name(TaskShape task);

struct ClassificationRecord {
    std::string text;
    int label = 0;
};

struct TranslationRecord {
    std::string src;
    std::string tgt;
};

struct QaRecord {
    std::string context;
    std::string question;
    std::string answer_text;
    std::size_t answer_start = 0;
};

// One JSONL record. `raw` preserves the original line so untouched records
// can be re-emitted byte-identically.
struct Record {
    std::variant<ClassificationRecord, TranslationRecord, QaRecord> data;
    std::string raw;

    const std::string& primary_text() const;  // text / src / question
};

std::vector<Record> read_jsonl(const std::filesystem::path& path,
                               TaskShape task);
std::string serialize_record(const Record& record);
void write_jsonl(const std::filesystem::path& path,
                 std::span<const Record> records);

// Plain text corpus, one sentence per line.
std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_lines(const std::filesystem::path& path,
                 std::span<const std::string> lines);

// Reads either a JSONL dataset (texts extracted per task shape) or a plain
// text file, keyed on the ".jsonl" extension unless `format` overrides.
std::vector<std::string> read_corpus(const std::filesystem::path& path,
                                     TaskShape task = TaskShape::classification,
                                     const std::string& format = "auto");

}  // namespace textrojan
