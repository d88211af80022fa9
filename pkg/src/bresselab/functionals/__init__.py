"""Energy, dissipation and the Lyapunov functional ladder."""

from bresselab.functionals.energy import (
    attach_energies,
    check_dissipation_identity,
    dissipation,
    energy_form,
    mode_energy,
)
from bresselab.functionals.lemmas import check_lemma_inequality, lemma_ids
from bresselab.functionals.lyapunov import FunctionalId, eval_functional, functional_form
from bresselab.functionals.proposition import check_proposition

__all__ = [
    "FunctionalId",
    "attach_energies",
    "check_dissipation_identity",
    "check_lemma_inequality",
    "check_proposition",
    "dissipation",
    "energy_form",
    "eval_functional",
    "functional_form",
    "lemma_ids",
    "mode_energy",
]
