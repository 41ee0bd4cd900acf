#include "cascade/dictionary.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>

namespace cascade {

std::string_view dimension_name(Dimension d) {
    switch (d) {
        case Dimension::Purpose: return "purpose";
        case Dimension::KnowledgeDomain: return "knowledge_domain";
        case Dimension::Scale: return "scale";
        default: return "method";
    }
}

std::optional<Dimension> dimension_from_name(std::string_view name) {
    if (name == "purpose") return Dimension::Purpose;
    if (name == "knowledge_domain") return Dimension::KnowledgeDomain;
    if (name == "scale") return Dimension::Scale;
    if (name == "method") return Dimension::Method;
    return std::nullopt;
}

std::string normalize_label(std::string_view raw) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    std::size_t begin = 0, end = raw.size();
    // Trim, then peel surrounding quote pairs (repeatedly, so the result is a
    // fixed point), trimming again between layers.
    for (;;) {
        while (begin < end && is_space(raw[begin])) ++begin;
        while (end > begin && is_space(raw[end - 1])) --end;
        if (end - begin >= 2 && (raw[begin] == '"' || raw[begin] == '\'') &&
            raw[end - 1] == raw[begin]) {
            ++begin;
            --end;
            continue;
        }
        break;
    }
    std::string out;
    out.reserve(end - begin);
    bool pending_gap = false;
    for (std::size_t i = begin; i < end; ++i) {
        char c = raw[i];
        if (c == '_' || is_space(c)) {
            pending_gap = true;
            continue;
        }
        if (pending_gap && !out.empty()) out.push_back(' ');
        pending_gap = false;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

ClassificationEntry ClassificationEntry::make(std::string annotation, std::string purpose,
                                              std::string knowledge_domain, std::string scale,
                                              std::optional<std::string> method) {
    ClassificationEntry e;
    e.annotation = std::move(annotation);
    e.purpose = std::move(purpose);
    e.knowledge_domain = std::move(knowledge_domain);
    e.scale = std::move(scale);
    e.method = std::move(method);
    e.purpose_key = normalize_label(e.purpose);
    e.knowledge_domain_key = normalize_label(e.knowledge_domain);
    e.scale_key = normalize_label(e.scale);
    if (e.method) e.method_key = normalize_label(*e.method);
    return e;
}

Vocabularies Vocabularies::builtin() {
    Vocabularies v;
    v.purpose = {"phenotype", "provenance", "evidence"};
    v.scale = {"variant", "position", "transcript", "variant in transcript", "gene", "window"};
    v.method = {"clinical evidence",      "statistical genetics evidence",
                "bioinformatics inference", "experimental in vivo",
                "experimental in vitro",  "experimental other"};
    v.knowledge_domain["evidence"] = {"human genetics", "animal genetics", "population genetics",
                                      "functional genetics", "epigenetics"};
    v.knowledge_domain["provenance"] = {"call annotations"};
    v.knowledge_domain["phenotype"] = {"phenotypic data", "inheritance mode"};
    return v;
}

bool Vocabularies::domain_known(std::string_view domain_key) const {
    for (const auto& [purpose_key, domains] : knowledge_domain)
        if (domains.count(std::string(domain_key))) return true;
    return false;
}

bool Vocabularies::domain_legal_for(std::string_view purpose_key,
                                    std::string_view domain_key) const {
    auto it = knowledge_domain.find(std::string(purpose_key));
    return it != knowledge_domain.end() && it->second.count(std::string(domain_key)) > 0;
}

bool ClassificationDictionary::add_entry(ClassificationEntry entry) {
    auto [it, inserted] = entries_.try_emplace(entry.annotation, std::move(entry));
    (void)it;
    return inserted;
}

const ClassificationEntry* ClassificationDictionary::find(std::string_view annotation) const {
    auto it = entries_.find(annotation);
    return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::string> ClassificationDictionary::classify(std::string_view annotation,
                                                              Dimension d) const {
    const ClassificationEntry* e = find(annotation);
    if (!e) return std::nullopt;
    switch (d) {
        case Dimension::Purpose: return e->purpose_key;
        case Dimension::KnowledgeDomain: return e->knowledge_domain_key;
        case Dimension::Scale: return e->scale_key;
        default: return e->method_key;
    }
}

namespace {

// ---------------------------------------------------------------------------
// YAML schema
// ---------------------------------------------------------------------------

std::string scalar_of(const YAML::Node& node, const std::string& context) {
    if (!node.IsScalar()) throw SchemaError(context + " must be a scalar string");
    return node.as<std::string>();
}

std::vector<std::string> string_list_of(const YAML::Node& node, const std::string& context) {
    if (!node.IsSequence()) throw SchemaError(context + " must be a list of strings");
    std::vector<std::string> out;
    for (const auto& item : node) out.push_back(scalar_of(item, context + " element"));
    return out;
}

void check_issues(const ClassificationEntry& entry, const Vocabularies& vocab,
                  std::vector<DictIssue>& issues) {
    auto unknown = [&](Dimension d, const std::string& value) {
        issues.push_back({DictIssueKind::UnknownDimensionValue, entry.annotation, d, value,
                          "annotation " + entry.annotation + ": unknown " +
                              std::string(dimension_name(d)) + " value \"" + value + "\""});
    };
    if (!vocab.purpose.count(entry.purpose_key)) unknown(Dimension::Purpose, entry.purpose);
    if (!vocab.scale.count(entry.scale_key)) unknown(Dimension::Scale, entry.scale);
    if (entry.method_key && !vocab.method.count(*entry.method_key))
        unknown(Dimension::Method, *entry.method);

    if (!vocab.domain_known(entry.knowledge_domain_key)) {
        unknown(Dimension::KnowledgeDomain, entry.knowledge_domain);
    } else if (vocab.purpose.count(entry.purpose_key) &&
               !vocab.domain_legal_for(entry.purpose_key, entry.knowledge_domain_key)) {
        issues.push_back({DictIssueKind::DomainPurposeMismatch, entry.annotation,
                          Dimension::KnowledgeDomain, entry.knowledge_domain,
                          "annotation " + entry.annotation + ": knowledge domain \"" +
                              entry.knowledge_domain + "\" is not legal under purpose \"" +
                              entry.purpose + "\""});
    }
}

Vocabularies parse_vocabularies(const YAML::Node& node) {
    Vocabularies vocab = Vocabularies::builtin();
    if (!node || node.IsNull()) return vocab;
    if (!node.IsMap()) throw SchemaError("vocabularies must be a map");

    bool extends = false;
    if (const auto& flag = node["extends"]) {
        if (!flag.IsScalar()) throw SchemaError("vocabularies.extends must be a boolean");
        extends = flag.as<bool>();
    }
    for (const auto& kv : node) {
        std::string key = scalar_of(kv.first, "vocabularies key");
        if (key == "extends") continue;
        if (key == "purpose" || key == "scale") {
            if (!extends)
                throw SchemaError("extending the " + key +
                                  " vocabulary requires vocabularies.extends: true");
            auto& target = key == "purpose" ? vocab.purpose : vocab.scale;
            for (const auto& value : string_list_of(kv.second, "vocabularies." + key))
                target.insert(normalize_label(value));
        } else if (key == "method") {
            for (const auto& value : string_list_of(kv.second, "vocabularies.method"))
                vocab.method.insert(normalize_label(value));
        } else if (key == "knowledge_domain") {
            if (!kv.second.IsMap())
                throw SchemaError("vocabularies.knowledge_domain must map purposes to lists");
            for (const auto& dk : kv.second) {
                std::string purpose_key =
                    normalize_label(scalar_of(dk.first, "knowledge_domain purpose"));
                if (!vocab.purpose.count(purpose_key))
                    throw SchemaError("vocabularies.knowledge_domain refers to unknown purpose \"" +
                                      purpose_key + "\"");
                for (const auto& value :
                     string_list_of(dk.second, "vocabularies.knowledge_domain." + purpose_key))
                    vocab.knowledge_domain[purpose_key].insert(normalize_label(value));
            }
        } else {
            throw SchemaError("unknown vocabularies field \"" + key + "\"");
        }
    }
    return vocab;
}

ClassificationEntry parse_entry(const std::string& annotation, const YAML::Node& body) {
    if (!body.IsMap())
        throw SchemaError("annotation " + annotation + " must map to {purpose, knowledge_domain, "
                          "scale, method?}");
    std::string purpose, knowledge_domain, scale;
    std::optional<std::string> method;
    bool has_purpose = false, has_domain = false, has_scale = false;
    for (const auto& kv : body) {
        std::string field = scalar_of(kv.first, "annotation field name");
        std::string context = "annotation " + annotation + "." + field;
        if (field == "purpose") {
            purpose = scalar_of(kv.second, context);
            has_purpose = true;
        } else if (field == "knowledge_domain") {
            knowledge_domain = scalar_of(kv.second, context);
            has_domain = true;
        } else if (field == "scale") {
            scale = scalar_of(kv.second, context);
            has_scale = true;
        } else if (field == "method") {
            method = scalar_of(kv.second, context);
        } else {
            throw SchemaError("annotation " + annotation + ": unknown field \"" + field + "\"");
        }
    }
    if (!has_purpose || !has_domain || !has_scale)
        throw SchemaError("annotation " + annotation +
                          ": purpose, knowledge_domain and scale are required");
    return ClassificationEntry::make(annotation, std::move(purpose), std::move(knowledge_domain),
                                     std::move(scale), std::move(method));
}

}  // namespace

DictionaryLoadResult parse_dictionary(std::string_view config_text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(config_text));
    } catch (const YAML::Exception& e) {
        throw SchemaError(std::string("dictionary is not valid YAML: ") + e.what());
    }
    if (root.IsNull()) throw SchemaError("dictionary file is empty");
    if (!root.IsMap()) throw SchemaError("dictionary must be a map");

    YAML::Node vocab_node, annotations_node;
    bool has_annotations = false;
    for (const auto& kv : root) {
        std::string key = scalar_of(kv.first, "top-level key");
        if (key == "vocabularies") {
            vocab_node = kv.second;
        } else if (key == "annotations") {
            annotations_node = kv.second;
            has_annotations = true;
        } else {
            throw SchemaError("unknown top-level field \"" + key + "\"");
        }
    }
    if (!has_annotations) throw SchemaError("dictionary is missing the annotations map");
    if (!annotations_node.IsMap() && !annotations_node.IsNull())
        throw SchemaError("annotations must be a map");

    DictionaryLoadResult result{ClassificationDictionary(parse_vocabularies(vocab_node)), {}};
    if (annotations_node.IsNull()) return result;

    for (const auto& kv : annotations_node) {
        std::string annotation = scalar_of(kv.first, "annotation name");
        ClassificationEntry entry = parse_entry(annotation, kv.second);
        if (!result.dictionary.add_entry(entry)) {
            result.issues.push_back({DictIssueKind::DuplicateAnnotation, annotation, std::nullopt,
                                     annotation,
                                     "annotation " + annotation + " is declared more than once"});
            continue;
        }
        check_issues(*result.dictionary.find(annotation), result.dictionary.vocabularies(),
                     result.issues);
    }
    return result;
}

ClassificationDictionary load_dictionary(std::string_view config_text) {
    DictionaryLoadResult result = parse_dictionary(config_text);
    if (!result.issues.empty()) throw DictionaryError(result.issues.front());
    return std::move(result.dictionary);
}

std::vector<DictIssue> check_dictionary(const ClassificationDictionary& dict) {
    std::vector<DictIssue> issues;
    for (const auto& [name, entry] : dict.entries())
        check_issues(entry, dict.vocabularies(), issues);
    return issues;
}

}  // namespace cascade
