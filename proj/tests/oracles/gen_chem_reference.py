#!/usr/bin/env python3
# SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
# SPDX-License-Identifier: Apache-2.0
"""Freezes RDKit descriptor values for the decoder corpus molecules.

Run once, offline, after gen_selfies_corpus.py. Each corpus line is decoded
with the reference loop, read into RDKit with full sanitization, and the
following columns are written to tests/data/chem_reference.tsv:

  line  aromaticAtoms  logp  tpsa  mw  hbd  hba  rings
"""

import pathlib

from rdkit import Chem, RDLogger
from rdkit.Chem import Crippen, Descriptors, rdMolDescriptors

from gen_selfies_corpus import reference_decode

RDLogger.DisableLog("rdApp.*")
ROOT = pathlib.Path(__file__).resolve().parents[2]


def main():
    lines = (ROOT / "data" / "selfies_corpus.txt").read_text().splitlines()
    out = ROOT / "tests" / "data" / "chem_reference.tsv"
    out.parent.mkdir(exist_ok=True)
    with open(out, "w") as f:
        for i, line in enumerate(lines):
            m = Chem.MolFromSmiles(reference_decode(line))
            arom = sum(1 for a in m.GetAtoms() if a.GetIsAromatic())
            hbd = sum(1 for a in m.GetAtoms()
                      if a.GetSymbol() in ("N", "O") and a.GetTotalNumHs() > 0)
            hba = sum(1 for a in m.GetAtoms() if a.GetSymbol() in ("N", "O"))
            f.write("%d\t%d\t%.6f\t%.6f\t%.6f\t%d\t%d\t%d\n" % (
                i, arom, Crippen.MolLogP(m), rdMolDescriptors.CalcTPSA(m),
                Descriptors.MolWt(m), hbd, hba, rdMolDescriptors.CalcNumRings(m)))


if __name__ == "__main__":
    main()
