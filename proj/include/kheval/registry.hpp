#pragma once

#include <any>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kheval/error.hpp"

namespace kheval {

enum class ComponentKind { Dataset, Backend, Scaler, Evaluator };

const char* to_string(ComponentKind kind);

/// Parameters handed to a component factory. Values are strings; components
/// parse what they need (paths, URLs, numeric knobs).
using ParamMap = std::map<std::string, std::string>;

/// Factory result is type-erased: datasets produce
/// shared_ptr<const std::vector<Sample>>, backends shared_ptr<Backend>,
/// scalers shared_ptr<const Scaler>, evaluators shared_ptr<const Evaluator>.
using ComponentFactory = std::function<std::any(const ParamMap&)>;

struct ComponentEntry {
    std::string name;
    ComponentFactory factory;
    std::string description;
};

/// Name-indexed component registry, keyed by (kind, name). Built once during
/// single-threaded startup, then treated as immutable and shared read-only.
/// Re-registration of an existing name is a hard error.
class Registry {
public:
    void register_component(ComponentKind kind, const std::string& name, ComponentEntry entry);
    const ComponentEntry& resolve(ComponentKind kind, const std::string& name) const;
    bool contains(ComponentKind kind, const std::string& name) const;
    std::vector<std::string> list_components(ComponentKind kind) const;

private:
    // std::map keeps names sorted, which list_components relies on.
    std::map<ComponentKind, std::map<std::string, ComponentEntry>> entries_;
};

/// True for nonempty lowercase snake_case: [a-z][a-z0-9_]*.
bool is_valid_component_name(const std::string& name);

}  // namespace kheval
