#include "kheval/registry.hpp"

#include <sstream>

namespace kheval {

const char* to_string(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::Dataset: return "dataset";
        case ComponentKind::Backend: return "backend";
        case ComponentKind::Scaler: return "scaler";
        case ComponentKind::Evaluator: return "evaluator";
    }
    return "unknown";
}

bool is_valid_component_name(const std::string& name) {
    if (name.empty()) return false;
    if (!(name[0] >= 'a' && name[0] <= 'z')) return false;
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

void Registry::register_component(ComponentKind kind, const std::string& name,
                                  ComponentEntry entry) {
    if (!is_valid_component_name(name)) {
        throw Error(ErrorKind::InvalidName,
                    "component name '" + name + "' must be nonempty lowercase snake_case");
    }
    auto& bucket = entries_[kind];
    if (bucket.count(name) > 0) {
        throw Error(ErrorKind::DuplicateName,
                    std::string(to_string(kind)) + " '" + name + "' is already registered");
    }
    entry.name = name;
    bucket.emplace(name, std::move(entry));
}

const ComponentEntry& Registry::resolve(ComponentKind kind, const std::string& name) const {
    auto kit = entries_.find(kind);
    if (kit != entries_.end()) {
        auto it = kit->second.find(name);
        if (it != kit->second.end()) return it->second;
    }
    std::ostringstream msg;
    msg << "no " << to_string(kind) << " named '" << name << "'; available: {";
    bool first = true;
    for (const auto& avail : list_components(kind)) {
        if (!first) msg << ", ";
        msg << '"' << avail << '"';
        first = false;
    }
    msg << "}";
    throw Error(ErrorKind::UnknownComponent, msg.str());
}

bool Registry::contains(ComponentKind kind, const std::string& name) const {
    auto kit = entries_.find(kind);
    return kit != entries_.end() && kit->second.count(name) > 0;
}

std::vector<std::string> Registry::list_components(ComponentKind kind) const {
    std::vector<std::string> names;
    auto kit = entries_.find(kind);
    if (kit == entries_.end()) return names;
    names.reserve(kit->second.size());
    for (const auto& [name, entry] : kit->second) names.push_back(name);
    return names;
}

}  // namespace kheval
