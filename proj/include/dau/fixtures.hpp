#pragma once

#include <string>
#include <vector>

#include "dau/automaton.hpp"
#include "dau/explicit_model.hpp"

namespace dau {

// Bundled inputs addressable as "fixture:NAME" wherever a model file is
// expected. Automata: TOY, TOY-MIN, A, B, B-red. Explicit trees: FIG2,
// CEX-NEXT, CEX-BIG.
std::vector<std::string> fixture_names();
bool is_automaton_fixture(const std::string& name);
bool is_model_fixture(const std::string& name);

// Raw JSON text; throws std::runtime_error on unknown names.
const std::string& fixture_text(const std::string& name);

StitAutomaton fixture_automaton(const std::string& name);
ExplicitStitModel fixture_model(const std::string& name);

}  // namespace dau
