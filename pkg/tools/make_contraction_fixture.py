"""Regenerate tests/fixtures/contraction_witness_data.json.

The fixture bundles a base operator with one witnessed multiple:

* base     — the minimal telescoper of the Gamma-ratio term fixture;
* multiple — the minimum-(degree, height) element of the deterministic
  solution basis at the (order 3, degree 8, height 8) cell of the base's
  polynomial ideal (ties broken by basis position);
* scalar/cofactor — the canonical pair from ``contraction.cofactor``.

Everything downstream (witness drops, syzygy dimensions, region
parameters) is derived, so this script is the single source of truth for
the committed JSON.  Deterministic: rerunning it reproduces the file
byte for byte.
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from odh.clm import multiples_shape_basis
from odh.contraction import CofactorWitness, ContractionData, cofactor
from odh.hyperterm import ProperTerm, minimal_telescoper
from odh.ore import shape_of


def main() -> None:
    term_path = ROOT / "tests" / "fixtures" / "gamma_ratio_term.json"
    term = ProperTerm.from_json(json.loads(term_path.read_text()))
    base = minimal_telescoper(term).operator

    basis = multiples_shape_basis(base, 3, 8, 8)
    multiple = min(basis, key=lambda op: (shape_of(op).d, shape_of(op).h))
    scalar, cof = cofactor(multiple, base)

    data = ContractionData(base, [CofactorWitness(multiple, scalar, cof)])
    out = ROOT / "tests" / "fixtures" / "contraction_witness_data.json"
    out.write_text(json.dumps(data.to_json(), indent=1) + "\n")
    print(f"wrote {out}")
    print(f"base shape: {shape_of(base)}")
    print(f"multiple shape: {shape_of(multiple)}")


if __name__ == "__main__":
    main()
