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

#include "metrics/metrics.hpp"

#include <set>
#include <sstream>

#include "common/error.hpp"

namespace mtlqa::metrics {

std::string normalize_answer(std::string_view s) {
  std::string cleaned;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    const bool punct = (u >= 33 && u <= 47) || (u >= 58 && u <= 64) || (u >= 91 && u <= 96) || (u >= 123 && u <= 126);
    if (punct) continue;
    cleaned.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
  }
  std::istringstream in(cleaned);
  std::string word, out;
  while (in >> word) {
    if (word == "a" || word == "an" || word == "the") continue;
    if (!out.empty()) out.push_back(' ');
    out += word;
  }
  return out;
}

int span_em(std::string_view pred, std::string_view gold) { return normalize_answer(pred) == normalize_answer(gold); }

namespace {

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

double f1_of(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

PRF bag_prf(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  if (pred.empty() && gold.empty()) return {1.0, 1.0, 1.0};
  if (pred.empty() || gold.empty()) return {};
  std::map<std::string, long> counts;
  for (const auto& g : gold) ++counts[g];
  std::size_t overlap = 0;
  for (const auto& p : pred) {
    auto it = counts.find(p);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  PRF r;
  r.precision = static_cast<double>(overlap) / static_cast<double>(pred.size());
  r.recall = static_cast<double>(overlap) / static_cast<double>(gold.size());
  r.f1 = f1_of(r.precision, r.recall);
  return r;
}

PRF token_prf(std::string_view pred, std::string_view gold) {
  return bag_prf(words(normalize_answer(pred)), words(normalize_answer(gold)));
}

double token_f1(std::string_view pred, std::string_view gold) { return token_prf(pred, gold).f1; }

ClassScores lf_exact_scores(const std::vector<int>& preds, const std::vector<int>& golds, int num_classes) {
  if (preds.empty()) throw InvariantError("cannot score an empty prediction list");
  if (preds.size() != golds.size()) throw DimensionError("prediction and gold lists differ in length");
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (int v : {preds[i], golds[i]}) {
      if (v < 0 || v >= num_classes) throw IndexError("class id " + std::to_string(v) + " outside [0, " +
                                                      std::to_string(num_classes) + ")");
    }
  }
  const auto k = static_cast<std::size_t>(num_classes);
  ClassScores s;
  s.confusion.assign(k, std::vector<std::size_t>(k, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    ++s.confusion[static_cast<std::size_t>(golds[i])][static_cast<std::size_t>(preds[i])];
    correct += preds[i] == golds[i];
  }
  const double n = static_cast<double>(preds.size());
  s.accuracy = static_cast<double>(correct) / n;

  std::size_t seen = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t tp = s.confusion[c][c], support = 0, predicted = 0;
    for (std::size_t o = 0; o < k; ++o) {
      support += s.confusion[c][o];
      predicted += s.confusion[o][c];
    }
    if (support == 0 && predicted == 0) continue;
    PRF p;
    p.precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    p.recall = support ? static_cast<double>(tp) / static_cast<double>(support) : 0.0;
    p.f1 = f1_of(p.precision, p.recall);
    s.per_class[static_cast<int>(c)] = p;
    s.support[static_cast<int>(c)] = support;
    const double w = static_cast<double>(support) / n;
    s.weighted.precision += w * p.precision;
    s.weighted.recall += w * p.recall;
    s.weighted.f1 += w * p.f1;
    s.macro.precision += p.precision;
    s.macro.recall += p.recall;
    s.macro.f1 += p.f1;
    ++seen;
  }
  s.macro.precision /= static_cast<double>(seen);
  s.macro.recall /= static_cast<double>(seen);
  s.macro.f1 /= static_cast<double>(seen);
  return s;
}

PRF lf_relaxed_scores(const std::vector<int>& preds, const std::vector<int>& golds,
                      const std::vector<corpus::LogicalForm>& inventory) {
  if (preds.empty()) throw InvariantError("cannot score an empty prediction list");
  if (preds.size() != golds.size()) throw DimensionError("prediction and gold lists differ in length");
  auto tokens_of = [&](int id) -> const std::vector<std::string>& {
    for (const auto& lf : inventory) {
      if (lf.lf_id == id) {
        if (lf.lf_tokens.empty()) throw InvariantError("logical form " + std::to_string(id) + " has no tokenization");
        return lf.lf_tokens;
      }
    }
    throw IndexError("logical form " + std::to_string(id) + " is not in the inventory");
  };
  PRF total;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto p = bag_prf(tokens_of(preds[i]), tokens_of(golds[i]));
    total.precision += p.precision;
    total.recall += p.recall;
    total.f1 += p.f1;
  }
  const double n = static_cast<double>(preds.size());
  return {total.precision / n, total.recall / n, total.f1 / n};
}

ClassScores evidence_scores(const std::vector<int>& preds, const std::vector<int>& golds) {
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if ((preds[i] != 0 && preds[i] != 1) || (i < golds.size() && golds[i] != 0 && golds[i] != 1)) {
      throw IndexError("evidence labels must be 0 or 1");
    }
  }
  return lf_exact_scores(preds, golds, 2);
}

nlohmann::json prf_to_json(const PRF& p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

namespace {

nlohmann::json class_scores_to_json(const ClassScores& s) {
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [c, p] : s.per_class) {
    auto j = prf_to_json(p);
    j["support"] = s.support.at(c);
    per[std::to_string(c)] = j;
  }
  return {{"weighted", prf_to_json(s.weighted)},
          {"macro", prf_to_json(s.macro)},
          {"accuracy", s.accuracy},
          {"per_class", per},
          {"confusion", s.confusion}};
}

}  // namespace

nlohmann::json report_to_json(const EvalReport& r) {
  nlohmann::json j;
  j["n_examples"] = r.n_examples;
  if (r.em) j["em"] = *r.em;
  if (r.token_f1) j["token_f1"] = *r.token_f1;
  if (r.lf_exact) j["lf_exact"] = class_scores_to_json(*r.lf_exact);
  if (r.lf_relaxed) j["lf_relaxed"] = prf_to_json(*r.lf_relaxed);
  if (r.evidence) j["evidence"] = class_scores_to_json(*r.evidence);
  if (!r.per_lf_em_f1.empty()) {
    nlohmann::json per = nlohmann::json::object();
    for (const auto& [lf, v] : r.per_lf_em_f1) per[std::to_string(lf)] = {{"em", v.first}, {"token_f1", v.second}};
    j["per_lf"] = per;
  }
  return j;
}

std::string confusion_csv(const ClassScores& s) {
  std::ostringstream os;
  os << "gold\\pred";
  for (std::size_t c = 0; c < s.confusion.size(); ++c) os << ',' << c;
  os << '\n';
  for (std::size_t g = 0; g < s.confusion.size(); ++g) {
    os << g;
    for (auto v : s.confusion[g]) os << ',' << v;
    os << '\n';
  }
  return os.str();
}

}  // namespace mtlqa::metrics
