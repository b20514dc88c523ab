/* Copyright 2026 The mtlqa Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

#include "corpus/dataset.hpp"

#include "common/error.hpp"

namespace mtlqa::corpus {

std::string QAExample::context_text() const {
  std::string out;
  for (std::size_t i = 0; i < context.size(); ++i) {
    if (i) out.push_back(' ');
    out += context[i];
  }
  return out;
}

std::size_t QAExample::sentence_offset(std::size_t i) const {
  std::size_t off = 0;
  for (std::size_t s = 0; s < i && s < context.size(); ++s) off += context[s].size() + 1;
  return off;
}

nlohmann::json example_to_json(const QAExample& ex) {
  nlohmann::json j;
  j["id"] = ex.id;
  j["note_id"] = ex.note_id;
  j["fact_index"] = ex.fact_index;
  j["setting"] = ex.setting;
  j["question"] = ex.question;
  j["question_template_id"] = ex.question_template_id;
  j["lf_id"] = ex.lf_id;
  j["context"] = ex.context;
  j["evidence_index"] = ex.evidence_index;
  j["answer"] = {{"sentence_index", ex.answer.sentence_index},
                 {"char_start", ex.answer.char_start},
                 {"char_end", ex.answer.char_end},
                 {"text", ex.answer.text}};
  j["question_entities"] = text::tags_to_json(ex.question_entities);
  j["context_entities"] = text::tags_to_json(ex.context_entities);
  return j;
}

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw DataError(std::string("missing required field '") + name + "'");
  return *it;
}

template <class T>
T typed_field(const nlohmann::json& j, const char* name) {
  const auto& v = field(j, name);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DataError(std::string("field '") + name + "' has the wrong type");
  }
}

}  // namespace

QAExample example_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("record is not a JSON object");
  QAExample ex;
  ex.id = typed_field<std::string>(j, "id");
  ex.note_id = typed_field<int>(j, "note_id");
  ex.fact_index = typed_field<std::size_t>(j, "fact_index");
  ex.setting = typed_field<std::string>(j, "setting");
  ex.question = typed_field<std::string>(j, "question");
  ex.question_template_id = typed_field<int>(j, "question_template_id");
  ex.lf_id = typed_field<int>(j, "lf_id");
  ex.context = typed_field<std::vector<std::string>>(j, "context");
  ex.evidence_index = typed_field<std::size_t>(j, "evidence_index");
  const auto& a = field(j, "answer");
  if (!a.is_object()) throw DataError("field 'answer' has the wrong type");
  ex.answer.sentence_index = typed_field<std::size_t>(a, "sentence_index");
  ex.answer.char_start = typed_field<std::size_t>(a, "char_start");
  ex.answer.char_end = typed_field<std::size_t>(a, "char_end");
  ex.answer.text = typed_field<std::string>(a, "text");
  ex.question_entities = text::tags_from_json(field(j, "question_entities"));
  ex.context_entities = text::tags_from_json(field(j, "context_entities"));

  if (ex.setting != "sentence" && ex.setting != "paragraph") {
    throw DataError("field 'setting' must be \"sentence\" or \"paragraph\"");
  }
  if (ex.evidence_index >= ex.context.size()) throw DataError("field 'evidence_index' is outside the context");
  const auto ctx = ex.context_text();
  if (ex.answer.char_start >= ex.answer.char_end || ex.answer.char_end > ctx.size() ||
      ctx.compare(ex.answer.char_start, ex.answer.char_end - ex.answer.char_start, ex.answer.text) != 0) {
    throw DataError("field 'answer' does not match the context text at its offsets");
  }
  return ex;
}

DatasetWriter::DatasetWriter(const std::string& path) : path_(path), out_(path, std::ios::trunc) {
  if (!out_) throw IoError("cannot write dataset '" + path + "'");
}

void DatasetWriter::write(const QAExample& ex) {
  out_ << example_to_json(ex).dump() << '\n';
  if (!out_) throw IoError("failed writing dataset '" + path_ + "'");
  ++count_;
}

void DatasetWriter::close() {
  out_.close();
  if (out_.fail()) throw IoError("failed closing dataset '" + path_ + "'");
}

DatasetReader::DatasetReader(const std::string& path) : path_(path), in_(path) {
  if (!in_) throw IoError("cannot open dataset '" + path + "'");
}

bool DatasetReader::next(QAExample& ex) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      ex = example_from_json(j);
      return true;
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path_ + ":" + std::to_string(line_) + ": malformed JSON: " + e.what());
    } catch (const DataError& e) {
      throw DataError(path_ + ":" + std::to_string(line_) + ": " + e.what());
    }
  }
  return false;
}

void write_dataset(const std::vector<QAExample>& examples, const std::string& path) {
  DatasetWriter w(path);
  for (const auto& ex : examples) w.write(ex);
  w.close();
}

std::vector<QAExample> read_dataset(const std::string& path) {
  DatasetReader r(path);
  std::vector<QAExample> out;
  QAExample ex;
  while (r.next(ex)) out.push_back(std::move(ex));
  return out;
}

}  // namespace mtlqa::corpus
