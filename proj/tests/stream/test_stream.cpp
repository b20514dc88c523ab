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

// Writes a large JSONL corpus and reads it back one row at a time, checking
// that peak resident memory does not grow with the file.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "corpus/dataset.hpp"

namespace {

long peak_rss_kb() {
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line)) {
    if (line.rfind("VmHWM:", 0) == 0) return std::stol(line.substr(6));
  }
  return -1;
}

}  // namespace

int main() {
  using namespace mtlqa::corpus;
  constexpr std::size_t kRows = 100000;
  const auto path = std::filesystem::temp_directory_path() / "mtlqa_stream.jsonl";

  QAExample ex;
  ex.setting = "paragraph";
  ex.question = "What is the dosage of aspirin?";
  ex.context = {"Patient was seen in clinic today for follow up.", "Aspirin 81 mg daily was continued.",
                "No new complaints were reported.", "Vitals were stable throughout the visit."};
  ex.evidence_index = 1;
  ex.answer = {1, ex.sentence_offset(1) + 8, ex.sentence_offset(1) + 13, "81 mg"};

  const long before = peak_rss_kb();
  {
    DatasetWriter w(path.string());
    for (std::size_t i = 0; i < kRows; ++i) {
      ex.id = "n" + std::to_string(i);
      ex.note_id = static_cast<int>(i);
      w.write(ex);
    }
    w.close();
  }
  const auto file_kb = static_cast<long>(std::filesystem::file_size(path) / 1024);

  DatasetReader r(path.string());
  QAExample row;
  std::size_t n = 0;
  while (r.next(row)) {
    if (row.answer.text != "81 mg") {
      std::cerr << "row " << n << " read back wrong\n";
      return 1;
    }
    ++n;
  }
  const long growth = peak_rss_kb() - before;
  std::filesystem::remove(path);
  std::cout << "rows " << n << " file " << file_kb << " KiB peak RSS growth " << growth << " KiB\n";
  if (n != kRows) return 1;
  // A resident copy of the file would push growth past its size.
  return growth >= 0 && growth < file_kb / 4 ? 0 : 1;
}
