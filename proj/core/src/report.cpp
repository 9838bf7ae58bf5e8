#include "revmine/report.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "revmine/errors.hpp"

namespace revmine {
namespace {

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    else if (!out.empty() && out.back() != '-')
      out.push_back('-');
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

nlohmann::json report_to_json(const MetricsReport& r) {
  nlohmann::json labels = nlohmann::json::object();
  for (size_t l = 0; l < kNumLabels; ++l) {
    labels[kLabelNames[l]] = {{"precision", r.per_label[l].precision},
                              {"recall", r.per_label[l].recall},
                              {"f1", r.per_label[l].f1},
                              {"support", r.per_label[l].support},
                              {"zero_division", r.per_label[l].zero_division}};
  }
  return {{"per_label", labels},
          {"weighted", {{"precision", r.weighted.precision},
                        {"recall", r.weighted.recall},
                        {"f1", r.weighted.f1}}},
          {"n_examples", r.n_examples},
          {"protocol", r.protocol},
          {"apps", r.apps},
          {"seed", r.seed},
          {"run_index", r.run_index}};
}

MetricsReport report_from_json(const nlohmann::json& j) {
  MetricsReport r;
  for (size_t l = 0; l < kNumLabels; ++l) {
    const auto& lj = j.at("per_label").at(kLabelNames[l]);
    r.per_label[l].precision = lj.at("precision");
    r.per_label[l].recall = lj.at("recall");
    r.per_label[l].f1 = lj.at("f1");
    r.per_label[l].support = lj.at("support");
    r.per_label[l].zero_division = lj.value("zero_division", false);
  }
  r.weighted.precision = j.at("weighted").at("precision");
  r.weighted.recall = j.at("weighted").at("recall");
  r.weighted.f1 = j.at("weighted").at("f1");
  r.n_examples = j.at("n_examples");
  r.protocol = j.value("protocol", "");
  r.apps = j.value("apps", std::vector<std::string>{});
  r.seed = j.value("seed", uint64_t{0});
  r.run_index = j.value("run_index", -1);
  return r;
}

std::string render_table(const MetricsReport& r) {
  std::ostringstream out;
  const int name_w = 18;
  out << std::string(name_w, ' ') << "Precision  Recall     F1\n";
  for (size_t l = 0; l < kNumLabels; ++l) {
    std::string name = kLabelDisplayNames[l];
    name.resize(name_w, ' ');
    out << name << fmt2(r.per_label[l].precision) << "       " << fmt2(r.per_label[l].recall)
        << "       " << fmt2(r.per_label[l].f1) << "\n";
  }
  std::string name = "Weighted Average";
  name.resize(name_w, ' ');
  out << name << fmt2(r.weighted.precision) << "       " << fmt2(r.weighted.recall)
      << "       " << fmt2(r.weighted.f1) << "\n";
  return out.str();
}

std::string report_filename(const MetricsReport& r) {
  std::string base = r.protocol.empty() ? "report" : r.protocol;
  for (char& c : base)
    if (c == '/') c = '_';
  if (r.protocol.find("out_domain") != std::string::npos && r.apps.size() == 1)
    base += "_" + slug(r.apps.front());
  if (r.run_index >= 0)
    base += "_run" + std::to_string(r.run_index) + "_seed" + std::to_string(r.seed);
  else
    base += "_aggregate";
  return base + ".json";
}

void write_text_file(const std::string& text, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " -> " + path.string());
}

void write_json_file(const nlohmann::json& j, const std::filesystem::path& path) {
  write_text_file(j.dump(2) + "\n", path);
}

}  // namespace revmine
