#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fixlab/taxonomy.hpp"

namespace fixlab {

struct EditSite {
  std::string id;
  SiteKind kind = SiteKind::Comparison;

  bool operator==(const EditSite&) const = default;
};

struct TemplateTestCase {
  std::string input;
  std::string expected_output;

  bool operator==(const TemplateTestCase&) const = default;
};

/// A correct C program with marked edit sites and renameable identifiers.
///
/// Markup grammar, applied to plain C text:
///   $name$                 renameable identifier; `name` must be a key of
///                          the rename pools and is also the default surface
///                          form (pool entry 0).
///   {{kind#id:inner}}      edit site of the given kind; `inner` is the
///                          reference span and may itself contain $name$
///                          markers but not nested sites.
/// The markup text must not otherwise contain `$`, `{{` or `}}`.
class ProgramTemplate {
 public:
  using RenamePool = std::pair<std::string, std::vector<std::string>>;

  /// Parses markup. Throws FormatError on bad syntax, unknown site kinds,
  /// duplicate site ids, or identifiers without a pool.
  static ProgramTemplate parse(std::string id, std::string markup,
                               std::vector<RenamePool> rename_pools,
                               std::vector<TemplateTestCase> tests);

  const std::string& id() const { return id_; }
  const std::string& markup() const { return markup_; }
  const std::vector<RenamePool>& rename_pools() const { return rename_pools_; }
  const std::vector<TemplateTestCase>& tests() const { return tests_; }
  const std::vector<EditSite>& edit_sites() const { return sites_; }

  /// Reference source rendered with default identifier names.
  const std::string& source() const { return default_source_; }

  /// Rendered program plus the byte span of every edit site.
  struct Rendering {
    std::string source;
    std::vector<std::pair<std::size_t, std::size_t>> site_spans; // offset, length
  };

  /// Renders with one name choice per pool (index into the pool).
  Rendering render(const std::vector<std::size_t>& name_choices) const;

  bool operator==(const ProgramTemplate& other) const;

 private:
  struct Segment {
    enum class Kind { Text, Ident } kind = Kind::Text;
    std::string value; // literal text, or pool key
    int site = -1;     // index into sites_, -1 when outside any site
  };

  std::string id_;
  std::string markup_;
  std::vector<RenamePool> rename_pools_;
  std::vector<TemplateTestCase> tests_;
  std::vector<Segment> segments_;
  std::vector<EditSite> sites_;
  std::string default_source_;
};

/// Ground-truth record of the single mutation an example carries.
struct InjectedEdit {
  std::string site_id;
  SiteKind site_kind = SiteKind::Comparison;
  std::size_t offset = 0; // byte offset of the span in the reference source
  std::string before;     // reference span text
  std::string after;      // buggy span text ("" for pure deletions)

  bool operator==(const InjectedEdit&) const = default;
};

struct Provenance {
  std::string template_id;
  InjectedEdit edit;

  bool operator==(const Provenance&) const = default;
};

struct FailingBehavior {
  std::string input;
  std::string expected_output;
  std::string observed; // coarse symptom descriptor, not the literal output

  bool operator==(const FailingBehavior&) const = default;
};

enum class Split { Unassigned, Train, Validation };

const char* to_string(Split split);

struct Example {
  std::string id;
  std::string buggy_source;
  std::string reference_source;
  std::vector<FailingBehavior> failing_behavior;
  FixType gold_fix_type = FixType::WRONG_CONDITION;
  std::optional<TeacherSupervision> supervision;
  Split split = Split::Unassigned;
  std::optional<Provenance> provenance;

  bool operator==(const Example&) const = default;
};

struct Dataset {
  std::vector<Example> examples;
  // Generation bookkeeping; in-memory only. The JSONL form is one example
  // per line, so equality — and hence persistence round-trips — is defined
  // over the examples alone.
  std::uint64_t seed = 0;
  double split_ratio = 0.0;

  bool operator==(const Dataset& other) const { return examples == other.examples; }
  std::vector<const Example*> split_view(Split split) const;
};

/// The table of seeded span rewrites, keyed by site kind. Exposed as data so
/// it can be versioned and diffed; `apply` lives in the corpus module.
struct MutationOption {
  std::string name;  // stable option identifier, e.g. "relax-strict"
  std::string after; // replacement span text
  bool operator==(const MutationOption&) const = default;
};

struct MutationTables {
  std::string version;
  /// comparator/operator substitution maps, per site kind name
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::vector<std::string>>>>> token_maps;

  bool operator==(const MutationTables&) const = default;
};

const MutationTables& mutation_tables();
std::string mutation_tables_to_json();

/// All rewrites the tables allow for a rendered span, in table order.
/// Empty when the span offers nothing to mutate.
std::vector<MutationOption> mutation_options(SiteKind kind, const std::string& span);

/// Builds one labeled buggy example from a template.
/// Throws NoEditSite when the template has no mutable site for `type`.
Example inject_bug(const ProgramTemplate& tmpl, FixType type, std::uint64_t seed);

/// count_per_class examples for every fix type, class-major order, ids
/// unique. Per-example seed is `seed ^ global_index`. Throws CoverageGap
/// when some fix type has no usable template.
Dataset generate_corpus(const std::vector<ProgramTemplate>& templates, std::size_t count_per_class,
                        std::uint64_t seed);

/// Assigns train/validation splits, stratified by gold fix type. The global
/// validation total is round(N * (1 - ratio)); per-class quotas follow by
/// largest remainder. Throws ClassTooSmall when a present class has fewer
/// than two examples, ConfigError when ratio is outside (0, 1).
Dataset stratified_split(Dataset dataset, double ratio, std::uint64_t seed);

void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

std::string to_jsonl(const Dataset& dataset);
Dataset dataset_from_jsonl(const std::string& text);

const std::vector<ProgramTemplate>& builtin_templates();
std::vector<ProgramTemplate> load_templates(const std::filesystem::path& path);
void save_templates(const std::vector<ProgramTemplate>& templates, const std::filesystem::path& path);

} // namespace fixlab
