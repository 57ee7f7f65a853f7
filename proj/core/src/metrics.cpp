#include "fixlab/metrics.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "fixlab/error.hpp"

namespace fixlab {

namespace {

using Json = nlohmann::ordered_json;

double f1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  if (tp == 0 && fp == 0 && fn == 0) return 1.0; // nothing to get wrong
  double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

std::vector<ReasoningTag> as_set(const ReasoningTrace& trace) {
  std::vector<ReasoningTag> tags = trace.tags;
  std::sort(tags.begin(), tags.end());
  tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
  return tags;
}

bool traces_match(const ReasoningTrace& a, const ReasoningTrace& b, bool set_semantics) {
  if (set_semantics) return as_set(a) == as_set(b);
  return a.tags == b.tags;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", x);
  return buf;
}

} // namespace

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes)
    : classes_(num_classes), counts_(num_classes * num_classes, 0) {
  if (num_classes == 0) raise(ErrorCode::ConfigError, "confusion matrix needs classes");
}

void ConfusionMatrix::add(std::size_t gold, std::size_t predicted) {
  if (gold >= classes_ || predicted >= classes_) {
    raise(ErrorCode::ShapeMismatch, "class index out of range");
  }
  ++counts_[gold * classes_ + predicted];
  ++total_;
}

std::size_t ConfusionMatrix::at(std::size_t gold, std::size_t predicted) const {
  if (gold >= classes_ || predicted >= classes_) {
    raise(ErrorCode::ShapeMismatch, "class index out of range");
  }
  return counts_[gold * classes_ + predicted];
}

std::size_t ConfusionMatrix::gold_count(std::size_t c) const {
  std::size_t n = 0;
  for (std::size_t p = 0; p < classes_; ++p) n += at(c, p);
  return n;
}

std::size_t ConfusionMatrix::predicted_count(std::size_t c) const {
  std::size_t n = 0;
  for (std::size_t g = 0; g < classes_; ++g) n += at(g, c);
  return n;
}

double accuracy(const ConfusionMatrix& matrix) {
  if (matrix.total() == 0) raise(ErrorCode::EmptyInput, "accuracy of an empty matrix");
  std::size_t hit = 0;
  for (std::size_t c = 0; c < matrix.num_classes(); ++c) hit += matrix.at(c, c);
  return static_cast<double>(hit) / static_cast<double>(matrix.total());
}

std::vector<double> per_class_f1(const ConfusionMatrix& matrix) {
  std::vector<double> out(matrix.num_classes(), 0.0);
  for (std::size_t c = 0; c < matrix.num_classes(); ++c) {
    std::size_t tp = matrix.at(c, c);
    std::size_t fp = matrix.predicted_count(c) - tp;
    std::size_t fn = matrix.gold_count(c) - tp;
    // Zero-support classes score 0 here by the P+R=0 rule, not 1: per-class
    // F1 feeds the macro average, where "absent" must not look like "solved".
    out[c] = (tp == 0 && fp == 0 && fn == 0) ? 0.0 : f1_from_counts(tp, fp, fn);
  }
  return out;
}

double macro_f1(const ConfusionMatrix& matrix, bool include_absent) {
  std::vector<double> f1 = per_class_f1(matrix);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t c = 0; c < matrix.num_classes(); ++c) {
    if (!include_absent && matrix.gold_count(c) == 0) continue;
    sum += f1[c];
    ++n;
  }
  if (n == 0) raise(ErrorCode::EmptyInput, "macro F1 with no supported classes");
  return sum / static_cast<double>(n);
}

TagScores score_tags(const std::vector<ReasoningTrace>& predicted,
                     const std::vector<ReasoningTrace>& gold) {
  if (predicted.size() != gold.size()) {
    raise(ErrorCode::ShapeMismatch, "prediction/gold count mismatch");
  }
  if (predicted.empty()) raise(ErrorCode::EmptyInput, "no traces to score");

  std::array<std::size_t, kNumReasoningTags> tp{}, fp{}, fn{}, correct{};
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    for (std::size_t t = 0; t < kNumReasoningTags; ++t) {
      auto tag = static_cast<ReasoningTag>(t);
      bool in_pred = predicted[i].contains(tag);
      bool in_gold = gold[i].contains(tag);
      if (in_pred && in_gold) ++tp[t];
      if (in_pred && !in_gold) ++fp[t];
      if (!in_pred && in_gold) ++fn[t];
      if (in_pred == in_gold) ++correct[t];
    }
  }
  TagScores scores;
  std::size_t tp_all = 0, fp_all = 0, fn_all = 0;
  double macro_sum = 0.0;
  for (std::size_t t = 0; t < kNumReasoningTags; ++t) {
    tp_all += tp[t];
    fp_all += fp[t];
    fn_all += fn[t];
    macro_sum += f1_from_counts(tp[t], fp[t], fn[t]);
    scores.per_tag_accuracy[t] =
        static_cast<double>(correct[t]) / static_cast<double>(predicted.size());
  }
  scores.micro_f1 = f1_from_counts(tp_all, fp_all, fn_all);
  scores.macro_f1 = macro_sum / static_cast<double>(kNumReasoningTags);
  return scores;
}

double exact_match(const std::vector<ReasoningTrace>& predicted,
                   const std::vector<ReasoningTrace>& gold, bool set_semantics) {
  if (predicted.size() != gold.size()) {
    raise(ErrorCode::ShapeMismatch, "prediction/gold count mismatch");
  }
  if (predicted.empty()) raise(ErrorCode::EmptyInput, "no traces to score");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (traces_match(predicted[i], gold[i], set_semantics)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

ConditionalAccuracy conditional_accuracy(Variant variant, const std::vector<Prediction>& preds,
                                         const std::vector<FixType>& gold_fixes,
                                         const std::vector<ReasoningTrace>& gold_traces,
                                         bool set_semantics) {
  if (variant == Variant::LabelOnly) {
    raise(ErrorCode::NoTraceOutputs,
          "conditional accuracy needs trained trace outputs; the label-only variant has none");
  }
  if (preds.size() != gold_fixes.size() || preds.size() != gold_traces.size()) {
    raise(ErrorCode::ShapeMismatch, "prediction/gold count mismatch");
  }
  ConditionalAccuracy out;
  std::size_t hit_correct = 0, hit_incorrect = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    bool trace_right = traces_match(preds[i].predicted_trace, gold_traces[i], set_semantics);
    bool fix_right = preds[i].predicted_fix == static_cast<int>(gold_fixes[i]);
    if (trace_right) {
      ++out.correct_trace_count;
      if (fix_right) ++hit_correct;
    } else {
      ++out.incorrect_trace_count;
      if (fix_right) ++hit_incorrect;
    }
  }
  if (out.correct_trace_count > 0) {
    out.given_correct_trace =
        static_cast<double>(hit_correct) / static_cast<double>(out.correct_trace_count);
  }
  if (out.incorrect_trace_count > 0) {
    out.given_incorrect_trace =
        static_cast<double>(hit_incorrect) / static_cast<double>(out.incorrect_trace_count);
  }
  return out;
}

std::string EvalReport::to_json() const {
  Json j;
  j["num_examples"] = num_examples;
  j["variant"] = to_string(variant);
  j["accuracy"] = accuracy;
  j["macro_f1"] = macro_f1;
  Json per_class;
  for (std::size_t c = 0; c < per_class_f1.size(); ++c) {
    per_class[to_string(static_cast<FixType>(c))] = per_class_f1[c];
  }
  j["per_class_f1"] = std::move(per_class);
  if (tags) {
    Json jt;
    jt["micro_f1"] = tags->micro_f1;
    jt["macro_f1"] = tags->macro_f1;
    Json per_tag;
    for (std::size_t t = 0; t < kNumReasoningTags; ++t) {
      per_tag[to_string(static_cast<ReasoningTag>(t))] = tags->per_tag_accuracy[t];
    }
    jt["per_tag_accuracy"] = std::move(per_tag);
    jt["exact_match"] = tags->exact_match;
    j["tag_metrics"] = std::move(jt);
  } else {
    j["tag_metrics"] = nullptr;
  }
  if (conditional) {
    Json jc;
    jc["given_correct_trace"] = conditional->given_correct_trace
                                    ? Json(*conditional->given_correct_trace)
                                    : Json(nullptr);
    jc["given_incorrect_trace"] = conditional->given_incorrect_trace
                                      ? Json(*conditional->given_incorrect_trace)
                                      : Json(nullptr);
    jc["correct_trace_count"] = conditional->correct_trace_count;
    jc["incorrect_trace_count"] = conditional->incorrect_trace_count;
    j["conditional"] = std::move(jc);
  } else {
    j["conditional"] = nullptr;
  }
  return j.dump();
}

std::string EvalReport::render_text() const {
  std::string out;
  out += "fix-type prediction (" + std::to_string(num_examples) + " examples, " +
         to_string(variant) + ")\n";
  out += "  accuracy  " + format_double(accuracy) + "\n";
  out += "  macro F1  " + format_double(macro_f1) + "\n";
  out += "per-class F1\n";
  std::size_t width = 0;
  for (std::size_t c = 0; c < per_class_f1.size(); ++c) {
    width = std::max(width, std::string(to_string(static_cast<FixType>(c))).size());
  }
  for (std::size_t c = 0; c < per_class_f1.size(); ++c) {
    std::string name = to_string(static_cast<FixType>(c));
    out += "  " + name + std::string(width - name.size() + 2, ' ') +
           format_double(per_class_f1[c]) + "\n";
  }
  if (tags) {
    out += "reasoning traces\n";
    out += "  tag micro F1  " + format_double(tags->micro_f1) + "\n";
    out += "  tag macro F1  " + format_double(tags->macro_f1) + "\n";
    out += "  exact match   " + format_double(tags->exact_match) + "\n";
    out += "per-tag accuracy\n";
    std::size_t tag_width = 0;
    for (std::size_t t = 0; t < kNumReasoningTags; ++t) {
      tag_width = std::max(tag_width, std::string(to_string(static_cast<ReasoningTag>(t))).size());
    }
    for (std::size_t t = 0; t < kNumReasoningTags; ++t) {
      std::string name = to_string(static_cast<ReasoningTag>(t));
      out += "  " + name + std::string(tag_width - name.size() + 2, ' ') +
             format_double(tags->per_tag_accuracy[t]) + "\n";
    }
  }
  if (conditional) {
    out += "fix accuracy by trace correctness\n";
    auto line = [&](const char* label, const std::optional<double>& value, std::size_t n) {
      out += std::string("  ") + label;
      out += value ? format_double(*value) : std::string("   n/a");
      out += "  (n=" + std::to_string(n) + ")\n";
    };
    line("trace correct    ", conditional->given_correct_trace, conditional->correct_trace_count);
    line("trace incorrect  ", conditional->given_incorrect_trace,
         conditional->incorrect_trace_count);
  } else {
    out += "fix accuracy by trace correctness\n";
    out += "  not applicable (" + std::string(to_string(variant)) + " has no trace output)\n";
  }
  return out;
}

EvalReport evaluate(const StudentModel& model, const Vocabulary& vocab, const Dataset& dataset,
                    Split split, const EvalOptions& options) {
  std::vector<const Example*> examples = dataset.split_view(split);
  if (examples.empty()) {
    raise(ErrorCode::EmptySplit, std::string("no examples in split '") + to_string(split) + "'");
  }

  std::vector<Prediction> preds;
  std::vector<FixType> gold_fixes;
  preds.reserve(examples.size());
  for (const Example* ex : examples) {
    preds.push_back(student_forward(model, encode_example(*ex, vocab, model.config.max_len)));
    gold_fixes.push_back(ex->gold_fix_type);
  }

  ConfusionMatrix matrix(kNumFixTypes);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    matrix.add(static_cast<std::size_t>(gold_fixes[i]),
               static_cast<std::size_t>(preds[i].predicted_fix));
  }

  EvalReport report;
  report.num_examples = examples.size();
  report.variant = model.config.variant;
  report.accuracy = accuracy(matrix);
  report.macro_f1 = macro_f1(matrix, options.macro_include_absent);
  report.per_class_f1 = per_class_f1(matrix);

  if (model.config.variant == Variant::ReasoningDistilled) {
    std::vector<ReasoningTrace> gold_traces;
    std::vector<ReasoningTrace> pred_traces;
    gold_traces.reserve(examples.size());
    for (const Example* ex : examples) {
      if (!ex->supervision || !ex->supervision->valid) {
        raise(ErrorCode::UnsupervisedExample,
              "example '" + ex->id + "' has no valid supervision to score traces against");
      }
      gold_traces.push_back(ex->supervision->trace);
    }
    for (const Prediction& p : preds) pred_traces.push_back(p.predicted_trace);

    TagScores scores = score_tags(pred_traces, gold_traces);
    TagMetrics tags;
    tags.micro_f1 = scores.micro_f1;
    tags.macro_f1 = scores.macro_f1;
    tags.per_tag_accuracy = scores.per_tag_accuracy;
    tags.exact_match = exact_match(pred_traces, gold_traces, options.trace_set_semantics);
    report.tags = tags;
    report.conditional = conditional_accuracy(model.config.variant, preds, gold_fixes, gold_traces,
                                              options.trace_set_semantics);
  }
  return report;
}

} // namespace fixlab
