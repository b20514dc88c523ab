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

#pragma once

#include <cstddef>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "text/entities.hpp"

namespace mtlqa::corpus {

struct Answer {
  std::size_t sentence_index = 0;  // index into QAExample::context
  std::size_t char_start = 0;      // offsets into QAExample::context_text()
  std::size_t char_end = 0;
  std::string text;

  bool operator==(const Answer&) const = default;
};

// One (question, context, answer) record. Context sentences are joined with a
// single space to form the text the answer offsets refer to.
struct QAExample {
  std::string id;
  int note_id = 0;
  std::size_t fact_index = 0;
  std::string setting;  // "sentence" | "paragraph"
  std::string question;
  int question_template_id = 0;
  int lf_id = 0;
  std::vector<std::string> context;
  std::size_t evidence_index = 0;
  Answer answer;
  std::vector<text::EntityTag> question_entities;
  std::vector<text::EntityTag> context_entities;

  std::string context_text() const;
  // Character offset of context sentence i within context_text().
  std::size_t sentence_offset(std::size_t i) const;

  bool operator==(const QAExample&) const = default;
};

nlohmann::json example_to_json(const QAExample& ex);
// Throws DataError naming the first missing or ill-typed field.
QAExample example_from_json(const nlohmann::json& j);

class DatasetWriter {
 public:
  explicit DatasetWriter(const std::string& path);
  void write(const QAExample& ex);
  void close();
  std::size_t count() const { return count_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t count_ = 0;
};

// Streams one record at a time; memory use is independent of file size.
class DatasetReader {
 public:
  explicit DatasetReader(const std::string& path);
  // False at end of file. Malformed lines throw DataError with the line number.
  bool next(QAExample& ex);
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_ = 0;
};

void write_dataset(const std::vector<QAExample>& examples, const std::string& path);
std::vector<QAExample> read_dataset(const std::string& path);

}  // namespace mtlqa::corpus
