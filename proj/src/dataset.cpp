#include "textrojan/dataset.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace textrojan {

using ordered_json = nlohmann::ordered_json;

TaskShape parse_task(std::string_view name) {
    if (name == "classification") return TaskShape::classification;
    if (name == "translation") return TaskShape::translation;
    if (name == "qa") return TaskShape::qa;
    throw std::runtime_error("unknown task shape: " + std::string(name));
}

const char* task_name(TaskShape task) {
    switch (task) {
        case TaskShape::classification: return "classification";
        case TaskShape::translation: return "translation";
        case TaskShape::qa: return "qa";
    }
    return "?";
}

const std::string& Record::primary_text() const {
    if (const auto* c = std::get_if<ClassificationRecord>(&data)) return c->text;
    if (const auto* t = std::get_if<TranslationRecord>(&data)) return t->src;
    return std::get<QaRecord>(data).question;
}

namespace {

[[noreturn]] void schema_error(const std::filesystem::path& path,
                               std::size_t line_no, const std::string& what) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                             ": " + what);
}

Record parse_record(const std::filesystem::path& path, std::size_t line_no,
                    const std::string& line, TaskShape task) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const std::exception& e) {
        schema_error(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) schema_error(path, line_no, "record must be an object");
    Record rec;
    rec.raw = line;
    try {
        switch (task) {
            case TaskShape::classification: {
                ClassificationRecord c;
                c.text = j.at("text").get<std::string>();
                c.label = j.at("label").get<int>();
                rec.data = std::move(c);
                break;
            }
            case TaskShape::translation: {
                TranslationRecord t;
                t.src = j.at("src").get<std::string>();
                t.tgt = j.at("tgt").get<std::string>();
                rec.data = std::move(t);
                break;
            }
            case TaskShape::qa: {
                QaRecord q;
                q.context = j.at("context").get<std::string>();
                q.question = j.at("question").get<std::string>();
                const auto& ans = j.at("answer");
                q.answer_text = ans.at("text").get<std::string>();
                q.answer_start = ans.at("start").get<std::size_t>();
                if (q.answer_start > q.context.size() ||
                    q.context.compare(q.answer_start, q.answer_text.size(),
                                      q.answer_text) != 0) {
                    schema_error(path, line_no,
                                 "answer is not a substring of context at "
                                 "the given start offset");
                }
                rec.data = std::move(q);
                break;
            }
        }
    } catch (const ordered_json::exception& e) {
        schema_error(path, line_no, std::string("schema violation: ") + e.what());
    }
    return rec;
}

}  // namespace

std::vector<Record> read_jsonl(const std::filesystem::path& path,
                               TaskShape task) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset: " + path.string());
    std::vector<Record> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        records.push_back(parse_record(path, line_no, line, task));
    }
    return records;
}

std::string serialize_record(const Record& record) {
    ordered_json j;
    if (const auto* c = std::get_if<ClassificationRecord>(&record.data)) {
        j["text"] = c->text;
        j["label"] = c->label;
    } else if (const auto* t = std::get_if<TranslationRecord>(&record.data)) {
        j["src"] = t->src;
        j["tgt"] = t->tgt;
    } else {
        const auto& q = std::get<QaRecord>(record.data);
        j["context"] = q.context;
        j["question"] = q.question;
        j["answer"] = ordered_json{{"text", q.answer_text},
                                   {"start", q.answer_start}};
    }
    return j.dump();
}

void write_jsonl(const std::filesystem::path& path,
                 std::span<const Record> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write dataset: " + path.string());
    for (const auto& rec : records) {
        if (!rec.raw.empty()) {
            out << rec.raw << '\n';
        } else {
            out << serialize_record(rec) << '\n';
        }
    }
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

void write_lines(const std::filesystem::path& path,
                 std::span<const std::string> lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    for (const auto& line : lines) out << line << '\n';
}

std::vector<std::string> read_corpus(const std::filesystem::path& path,
                                     TaskShape task,
                                     const std::string& format) {
    const bool jsonl =
        format == "jsonl" || (format == "auto" && path.extension() == ".jsonl");
    if (!jsonl) return read_lines(path);
    std::vector<std::string> out;
    for (const auto& rec : read_jsonl(path, task)) {
        out.push_back(rec.primary_text());
    }
    return out;
}

}  // namespace textrojan
