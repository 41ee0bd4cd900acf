#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/errors.hpp"

namespace cascade {

// The four classification dimensions of the epistemological type system.
enum class Dimension { Purpose, KnowledgeDomain, Scale, Method };

inline constexpr std::array<Dimension, 4> kAllDimensions = {
    Dimension::Purpose, Dimension::KnowledgeDomain, Dimension::Scale, Dimension::Method};

std::string_view dimension_name(Dimension d);  // "purpose", "knowledge_domain", ...
std::optional<Dimension> dimension_from_name(std::string_view name);

// Canonical label form used for every dimension-value comparison: lowercased,
// trimmed, surrounding quotes stripped, underscore/whitespace runs collapsed
// to single spaces. Idempotent.
std::string normalize_label(std::string_view raw);

// Classification of one annotation. The plain fields keep the dictionary's
// spelling for display; the *_key fields hold normalized forms for matching.
struct ClassificationEntry {
    std::string annotation;
    std::string purpose;
    std::string knowledge_domain;
    std::string scale;
    std::optional<std::string> method;

    std::string purpose_key;
    std::string knowledge_domain_key;
    std::string scale_key;
    std::optional<std::string> method_key;

    static ClassificationEntry make(std::string annotation, std::string purpose,
                                    std::string knowledge_domain, std::string scale,
                                    std::optional<std::string> method = std::nullopt);
};

// Legal values per dimension (normalized). knowledge_domain is keyed by
// purpose: a domain is only legal under the purposes that list it.
struct Vocabularies {
    std::set<std::string> purpose;
    std::set<std::string> scale;
    std::set<std::string> method;
    std::map<std::string, std::set<std::string>> knowledge_domain;

    static Vocabularies builtin();

    bool domain_known(std::string_view domain_key) const;
    bool domain_legal_for(std::string_view purpose_key, std::string_view domain_key) const;
};

enum class DictIssueKind { DuplicateAnnotation, UnknownDimensionValue, DomainPurposeMismatch };

struct DictIssue {
    DictIssueKind kind;
    std::string annotation;
    std::optional<Dimension> dimension;
    std::string value;
    std::string message;
};

class DictionaryError : public Error {
public:
    explicit DictionaryError(DictIssue issue) : Error(issue.message), issue_(std::move(issue)) {}
    const DictIssue& issue() const { return issue_; }

private:
    DictIssue issue_;
};

class ClassificationDictionary {
public:
    ClassificationDictionary() : vocab_(Vocabularies::builtin()) {}
    explicit ClassificationDictionary(Vocabularies vocab) : vocab_(std::move(vocab)) {}

    // False if the annotation is already present (first entry wins).
    bool add_entry(ClassificationEntry entry);

    const ClassificationEntry* find(std::string_view annotation) const;

    // Normalized value of the annotation on the given dimension; nullopt when
    // the annotation is unknown or the (optional) dimension is absent.
    // Deterministic and total: Absent is a value, not an error.
    std::optional<std::string> classify(std::string_view annotation, Dimension d) const;

    const std::map<std::string, ClassificationEntry, std::less<>>& entries() const {
        return entries_;
    }
    const Vocabularies& vocabularies() const { return vocab_; }
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, ClassificationEntry, std::less<>> entries_;
    Vocabularies vocab_;
};

struct DictionaryLoadResult {
    ClassificationDictionary dictionary;
    std::vector<DictIssue> issues;
};

// Parses the YAML configuration, collecting classification issues (duplicates,
// unknown dimension values, purpose/domain mismatches) instead of throwing.
// Structural problems — unparseable YAML, unknown or missing fields, wrong
// node shapes, vocabulary extensions without the `extends` flag — still raise
// SchemaError. Offending entries stay in the dictionary so that callers can
// inspect them.
DictionaryLoadResult parse_dictionary(std::string_view config_text);

// Strict loader: raises DictionaryError on the first issue.
ClassificationDictionary load_dictionary(std::string_view config_text);

// Re-checks every entry of an (arbitrarily constructed) dictionary against its
// vocabularies. Empty result means internally consistent.
std::vector<DictIssue> check_dictionary(const ClassificationDictionary& dict);

}  // namespace cascade
