"""The bundled proof scripts: regeneration, registry replay, robustness."""

from pathlib import Path

import pytest

from pitl.derivations import SCRIPT_BUILDERS, common_vocabulary, write_scripts
from pitl.proofsys import REGISTRY, check_registry

from prfmut import generate_mutants, run_mutant

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def test_registry_replay():
    report = check_registry(SCRIPTS)
    assert len(report) == len(SCRIPT_BUILDERS)
    for line in report:
        assert "ACCEPTED" in line


def test_bundled_scripts_in_sync(tmp_path):
    written = write_scripts(tmp_path)
    assert set(written) == {"common.vocab", *SCRIPT_BUILDERS}
    for name in written:
        assert (tmp_path / name).read_text() == (SCRIPTS / name).read_text(), (
            f"{name} differs from its builder output")


@pytest.mark.parametrize("name", sorted(SCRIPT_BUILDERS))
def test_builders_accepted(name):
    verdict = SCRIPT_BUILDERS[name]().check()
    assert verdict.ok, verdict.error
    assert not verdict.premises_used


def test_every_registry_entry_has_a_script():
    assert {e.script for e in REGISTRY.values()} <= set(SCRIPT_BUILDERS)


@pytest.mark.parametrize("name", sorted(SCRIPT_BUILDERS))
def test_mutants_rejected(name):
    text = (SCRIPTS / name).read_text()
    vocab = common_vocabulary()
    mutants = list(generate_mutants(text, vocab))
    assert len(mutants) >= 20, f"only {len(mutants)} mutants for {name}"
    descs = [d for d, _t in mutants]
    assert len(descs) == len(set(descs))
    survivors = [desc for desc, mtext in mutants
                 if run_mutant(mtext, str(SCRIPTS)) is not None]
    assert not survivors, f"{name}: accepted mutants: {survivors}"
