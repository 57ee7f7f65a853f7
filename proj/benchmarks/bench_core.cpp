// Microbenchmarks for the hot paths: the autodiff step, the lexer, corpus
// generation, and diff construction/application. Not registered with ctest;
// run the binary directly.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "fixlab/corpus.hpp"
#include "fixlab/encode.hpp"
#include "fixlab/optim.hpp"
#include "fixlab/rng.hpp"
#include "fixlab/structured.hpp"
#include "fixlab/student.hpp"
#include "fixlab/tape.hpp"
#include "fixlab/teacher.hpp"

namespace {

fixlab::Dataset small_corpus() {
  fixlab::Dataset dataset = fixlab::generate_corpus(fixlab::builtin_templates(), 4, 7);
  dataset = fixlab::stratified_split(std::move(dataset), 0.8, 7);
  return fixlab::supervise_dataset(dataset, fixlab::TeacherMode::Oracle).first;
}

void BM_RngPermutation(benchmark::State& state) {
  fixlab::SeededRng rng(11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.permutation(static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_RngPermutation)->Arg(256)->Arg(4096);

void BM_LexExample(benchmark::State& state) {
  const fixlab::Dataset dataset = small_corpus();
  const std::string& source = dataset.examples.front().buggy_source;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fixlab::lex_c(source));
  }
}
BENCHMARK(BM_LexExample);

void BM_GenerateCorpus(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fixlab::generate_corpus(fixlab::builtin_templates(), static_cast<std::size_t>(state.range(0)), 3));
  }
}
BENCHMARK(BM_GenerateCorpus)->Arg(2)->Arg(8);

void BM_StudentStep(benchmark::State& state) {
  const fixlab::Dataset dataset = small_corpus();
  const fixlab::Vocabulary vocab = fixlab::build_vocab(dataset);
  fixlab::StudentConfig config;
  config.vocab_size = vocab.size();
  fixlab::StudentModel model = fixlab::init_student(config, 5);
  const fixlab::Example& example = dataset.examples.front();
  const fixlab::TokenSequence input = fixlab::encode_example(example, vocab, config.max_len);
  fixlab::AdamState adam{fixlab::AdamConfig{}};
  for (auto _ : state) {
    fixlab::Tape tape;
    fixlab::StudentParamVars params = fixlab::lift_student(tape, model);
    fixlab::Tape::Var loss =
        fixlab::student_example_loss(tape, params, config, input, example.gold_fix_type,
                                     &example.supervision->trace, 1.0);
    tape.backward(loss);
    std::vector<const fixlab::Tensor2D*> grads;
    for (fixlab::Tape::Var var : params.ordered()) grads.push_back(&tape.grad(var));
    adam.step(model.named_parameters(), grads);
    benchmark::DoNotOptimize(tape.value(loss));
  }
}
BENCHMARK(BM_StudentStep);

void BM_MakeApplyDiff(benchmark::State& state) {
  const fixlab::Dataset dataset = small_corpus();
  const fixlab::Example& example = dataset.examples.front();
  for (auto _ : state) {
    const std::string diff =
        fixlab::make_unified_diff(example.buggy_source, example.reference_source);
    benchmark::DoNotOptimize(fixlab::apply_patch(example.buggy_source, diff));
  }
}
BENCHMARK(BM_MakeApplyDiff);

} // namespace

BENCHMARK_MAIN();
