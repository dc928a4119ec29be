"""Character codegree sets of finite p-groups.

Groups are given by consistent power-commutator presentations. Codegree sets
come either from closed formulas (:mod:`codegree.formulas`) or from an exact
character table built over a finite field (:mod:`codegree.chartab`).
"""

from .catalog import GroupId, build, list_catalog, paper_rows
from .chartab import CharacterTable, CodegreeReport, character_table, codegrees_bruteforce
from .formulas import cod_formula, predict_from_paper
from .group import PcGroup, Subgroup, model, structural_profile
from .pc import PcPresentation, PresentationError, collect, load_presentation, presentation
from .verify import verify

__all__ = [
    "CharacterTable", "CodegreeReport", "GroupId", "PcGroup", "PcPresentation",
    "PresentationError", "Subgroup", "build", "character_table", "cod_formula",
    "codegrees_bruteforce", "collect", "list_catalog", "load_presentation", "model",
    "paper_rows", "predict_from_paper", "presentation", "structural_profile", "verify",
]
