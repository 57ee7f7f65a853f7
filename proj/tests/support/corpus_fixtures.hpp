#pragma once

#include <cstdint>
#include <utility>

#include <fixlab/corpus.hpp>
#include <fixlab/teacher.hpp>

namespace testsup {

// Injected + split + oracle-supervised corpus, the shape most tests want.
inline fixlab::Dataset supervised_corpus(std::size_t per_class, std::uint64_t seed,
                                         double ratio = 0.8) {
  fixlab::Dataset ds = fixlab::generate_corpus(fixlab::builtin_templates(), per_class, seed);
  ds = fixlab::stratified_split(std::move(ds), ratio, seed);
  return fixlab::supervise_dataset(ds, fixlab::TeacherMode::Oracle).first;
}

} // namespace testsup
