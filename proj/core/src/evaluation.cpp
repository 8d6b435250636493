#include "specmcd/evaluation.hpp"

#include <json.hpp>

namespace specmcd {

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& ref) {
  if (!pred.same_shape(ref)) {
    throw Error("confusion: mask shapes differ");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    const bool p = pred.values[i] != 0;
    const bool r = ref.values[i] != 0;
    if (p && r) ++c.tp;
    else if (p && !r) ++c.fp;
    else if (!p && r) ++c.fn;
    else ++c.tn;
  }
  return c;
}

namespace {

double ratio_or_zero(double num, double den, const char* name,
                     std::vector<std::string>& flags) {
  if (den == 0.0) {
    flags.push_back(std::string(name) + "-denominator-zero");
    return 0.0;
  }
  return num / den;
}

}  // namespace

Metrics compute_metrics(const ConfusionCounts& counts) {
  if (counts.total() == 0) {
    throw Error("compute_metrics: empty confusion table");
  }
  Metrics m;
  const double tp = static_cast<double>(counts.tp);
  const double fp = static_cast<double>(counts.fp);
  const double fn = static_cast<double>(counts.fn);
  const double tn = static_cast<double>(counts.tn);

  m.oa = (tp + tn) / (tp + fp + fn + tn);
  m.precision = ratio_or_zero(tp, tp + fp, "precision", m.flags);
  m.recall = ratio_or_zero(tp, tp + fn, "recall", m.flags);
  const double pr = m.precision * m.recall;
  m.f1 = ratio_or_zero(2.0 * pr, m.precision + m.recall, "f1", m.flags);
  m.f2 = ratio_or_zero(5.0 * pr, 4.0 * m.precision + m.recall, "f2", m.flags);
  return m;
}

std::string metrics_json(const Metrics& metrics,
                         const ConfusionCounts& counts) {
  nlohmann::ordered_json j;
  j["oa"] = metrics.oa;
  j["precision"] = metrics.precision;
  j["recall"] = metrics.recall;
  j["f1"] = metrics.f1;
  j["f2"] = metrics.f2;
  j["counts"] = {{"tp", counts.tp},
                 {"fp", counts.fp},
                 {"fn", counts.fn},
                 {"tn", counts.tn}};
  j["flags"] = metrics.flags;
  return j.dump(2) + "\n";
}

}  // namespace specmcd
