"""Drive every edit through the phrase grammar instead of the API.

The grammar is rebuilt from the component registry, so whatever the
registry knows becomes speakable -- including templates learned from files.
"""

from paramflow import Engine, Registry, build_grammar, parse_command, parse_number
from paramflow.errors import NoMatch

engine = Engine()
for phrase in [
    "add slider with value four",
    "add component construct point",
    "connect node one output out to node two input x",
    "connect node one output out to node two input y",
    "connect node one output out to node two input z",
    "add component box",
    "connect node two output point to node three input b",
]:
    outcome = engine.apply_phrase(phrase)
    created = f" -> node {outcome.created_id}" if outcome.created_id else ""
    print(f"{phrase!r}{created}")

mesh = engine.geometry_meshes()[0][1]
print("cube corner:", max(p.x for p in mesh.vertices))

# spoken numbers compose the usual English way, plus digit runs and decimals
for words in ["seven", "two thousand three hundred forty one",
              "four two", "minus four point five"]:
    value, _ = parse_number(words.split())
    print(f"{words!r} -> {value}")

# a phrase that matches nothing comes back with the closest template as a hint
try:
    parse_command(build_grammar(Registry()), "connect node one to node two")
except NoMatch as exc:
    print("no match, hint:", exc.hint)
