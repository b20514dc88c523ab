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

#include "corpus/lexicon.hpp"

#include <set>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "text/tokenizer.hpp"

namespace mtlqa::corpus {

const char* role_name(Role r) {
  switch (r) {
    case Role::kMedication: return "medication";
    case Role::kDosage: return "dosage";
    case Role::kSig: return "sig";
    case Role::kProblem: return "problem";
    case Role::kProcedure: return "procedure";
    case Role::kSymptom: return "symptom";
  }
  return "?";
}

const std::vector<LexEntry>& Lexicon::for_role(Role r) const {
  switch (r) {
    case Role::kMedication: return medications;
    case Role::kDosage: return dosages;
    case Role::kSig: return sigs;
    case Role::kProblem: return conditions;
    case Role::kProcedure: return procedures;
    case Role::kSymptom: return symptoms;
  }
  throw InvariantError("unknown role");
}

text::Gazetteer Lexicon::gazetteer() const {
  text::Gazetteer g;
  for (const auto* list : {&medications, &dosages, &sigs, &conditions, &symptoms, &procedures}) {
    for (const auto& e : *list) {
      if (!e.type.empty()) g.add(e.surface, e.type);
    }
  }
  for (const auto& [type, surfaces] : background) {
    for (const auto& s : surfaces) g.add(s, type);
  }
  return g;
}

namespace {

std::vector<LexEntry> typed(const std::vector<std::string>& names, const std::string& type) {
  std::vector<LexEntry> out;
  for (const auto& n : names) out.push_back({n, type});
  return out;
}

class NameForge {
 public:
  NameForge(std::uint64_t seed, std::set<std::string> taken) : rng_(seed), taken_(std::move(taken)) {}

  std::string make(const std::vector<std::string>& suffixes) {
    static const std::vector<std::string> onsets = {"b",  "d",  "f",  "g",  "k",  "l",  "m",  "n", "p",
                                                    "r",  "s",  "t",  "v",  "z",  "br", "cl", "dr", "fl",
                                                    "gr", "pr", "tr", "st", "sk", "ph", "qu", "x"};
    static const std::vector<std::string> vowels = {"a", "e", "i", "o", "u", "ae", "io", "ou", "y"};
    static const std::vector<std::string> codas = {"", "", "", "n", "r", "l", "s", "x", "m"};
    for (int attempt = 0; attempt < 10000; ++attempt) {
      std::string name;
      const auto syllables = 1 + rng_.below(2);
      for (std::uint64_t s = 0; s < syllables; ++s) name += rng_.pick(onsets) + rng_.pick(vowels) + rng_.pick(codas);
      name += rng_.pick(suffixes);
      if (taken_.insert(name).second) return name;
    }
    throw ConfigError("lexicon: name space exhausted; reduce the number of generated names");
  }

 private:
  Rng rng_;
  std::set<std::string> taken_;
};

}  // namespace

Lexicon build_lexicon(const LexiconSizes& sizes, std::uint64_t seed) {
  Lexicon lx;
  lx.medications = typed({"aspirin",       "metformin",    "lisinopril",  "atorvastatin", "amlodipine",
                          "metoprolol",    "omeprazole",   "simvastatin", "losartan",     "albuterol",
                          "gabapentin",    "hydrochlorothiazide", "sertraline", "furosemide", "acetaminophen",
                          "ibuprofen",     "warfarin",     "heparin",     "insulin",      "prednisone",
                          "amoxicillin",   "azithromycin", "ciprofloxacin", "levothyroxine", "pantoprazole",
                          "clopidogrel",   "tramadol",     "oxycodone",   "morphine",     "ondansetron",
                          "vancomycin",    "ceftriaxone",  "digoxin",     "diltiazem",    "carvedilol"},
                         "clnd");

  for (int amount : {1, 2, 5, 10, 12, 20, 25, 40, 50, 75, 80, 100, 125, 150, 200, 250, 300, 325, 400, 500, 650,
                     750, 800, 1000}) {
    for (const char* unit : {"mg", "mcg", "units"}) lx.dosages.push_back({std::to_string(amount) + " " + unit, "qnco"});
  }

  for (const char* s : {"once daily", "twice daily", "three times a day", "every morning", "at bedtime",
                        "every 6 hours", "every 8 hours", "every 12 hours", "weekly", "before meals",
                        "every other day", "as needed"}) {
    lx.sigs.push_back({s, ""});
  }

  lx.conditions = typed({"hypertension", "diabetes", "pneumonia", "asthma", "atrial fibrillation", "heart failure",
                         "chronic kidney disease", "copd", "cellulitis", "sepsis", "hypothyroidism",
                         "hyperlipidemia", "anemia", "gerd", "urinary tract infection", "deep vein thrombosis",
                         "pulmonary embolism", "osteoarthritis", "depression", "gout"},
                        "fndg");
  for (const char* s : {"gastric ulcer", "infiltrate", "pleural effusion"}) lx.conditions.push_back({s, "acab"});
  for (const char* s : {"hip fracture", "overdose", "laceration"}) lx.conditions.push_back({s, "inpo"});
  lx.conditions.push_back({"inguinal hernia", "anab"});

  lx.symptoms = typed({"headache", "nausea", "vomiting", "dizziness", "rash", "cough", "fatigue", "chest pain",
                       "shortness of breath", "abdominal pain", "diarrhea", "constipation", "fever", "palpitations",
                       "edema", "insomnia", "itching", "confusion", "back pain", "wheezing"},
                      "sosy");

  for (const char* s : {"chest x ray", "ct scan", "mri", "echocardiogram", "ekg", "colonoscopy", "endoscopy",
                        "ultrasound"}) {
    lx.procedures.push_back({s, "diap"});
  }
  for (const char* s : {"blood culture", "urinalysis", "cbc", "lipid panel", "biopsy"}) {
    lx.procedures.push_back({s, "lbpr"});
  }
  for (const char* s : {"dialysis", "physical therapy", "appendectomy", "cardiac catheterization", "intubation",
                        "transfusion", "radiation therapy", "stent placement"}) {
    lx.procedures.push_back({s, "topp"});
  }

  lx.background = {
      {"bpoc", {"heart", "lungs", "abdomen", "left knee", "liver", "kidneys", "skin", "right shoulder"}},
      {"anst", {"aortic valve", "femoral artery", "spine", "thyroid gland"}},
      {"aggp", {"elderly", "adult", "geriatric"}},
      {"evnt", {"fall", "motor vehicle accident", "hospital admission", "clinic visit"}},
      {"phob", {"walker", "wheelchair", "cane", "pacemaker"}},
      {"sbst", {"alcohol", "tobacco", "latex", "caffeine"}},
      {"lbtr", {"elevated troponin", "low potassium", "high glucose", "positive culture", "elevated creatinine"}},
      {"cgab", {"congenital heart defect", "cleft palate"}},
      {"emod", {"animal model"}},
  };

  std::set<std::string> taken;
  for (const auto* list : {&lx.medications, &lx.conditions, &lx.symptoms, &lx.procedures}) {
    for (const auto& e : *list) {
      for (const auto& t : text::tokenize(e.surface)) taken.insert(t.text);
    }
  }
  for (const auto& [type, surfaces] : lx.background) {
    for (const auto& s : surfaces) {
      for (const auto& t : text::tokenize(s)) taken.insert(t.text);
    }
  }

  NameForge forge(derive_seed(seed, 0x1e71c0), std::move(taken));
  for (std::size_t i = 0; i < sizes.extra_medications; ++i) {
    lx.medications.push_back(
        {forge.make({"pril", "olol", "statin", "mab", "cillin", "azole", "done", "mycin", "sartan", "tidine", "pam",
                     "xetine", "floxacin", "parin", "lukast"}),
         "clnd"});
  }
  for (std::size_t i = 0; i < sizes.extra_conditions; ++i) {
    lx.conditions.push_back({forge.make({"itis", "osis", "emia", "pathy", "oma", "iasis", "ectasia"}), "fndg"});
  }
  for (std::size_t i = 0; i < sizes.extra_symptoms; ++i) {
    lx.symptoms.push_back({forge.make({"algia", "rrhea", "esis", "spasm", "odynia", "plegia"}), "sosy"});
  }
  const char* proc_types[3] = {"diap", "lbpr", "topp"};
  for (std::size_t i = 0; i < sizes.extra_procedures; ++i) {
    lx.procedures.push_back({forge.make({"oscopy", "ography", "ectomy", "plasty", "otomy", "opexy"}), proc_types[i % 3]});
  }
  return lx;
}

}  // namespace mtlqa::corpus
