#!/usr/bin/env python3
# SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
# SPDX-License-Identifier: Apache-2.0
"""Generates the committed decoder corpus and its expected outputs.

Run once, offline. Requires the reference `selfies` package (2.x) and RDKit.
The reference derivation loop is reproduced from selfies.decoder with one
extension: the dedicated index tokens `[Idx0]`..`[Idx15]` carry their value
when read as a branch/ring length and are no-ops anywhere else. `[STOP]`
ends the string.

Outputs (relative to the repo root):
  data/selfies_corpus.txt           one token string per line
  data/selfies_corpus.expected.tsv  formula<TAB>atomCount<TAB>bondCount
  data/selfies_corpus.bonds.tsv     single<TAB>double<TAB>triple bond counts
"""

import pathlib
import random
import sys

from rdkit import Chem, RDLogger
from rdkit.Chem import rdMolDescriptors
from selfies import grammar_rules as gr
from selfies.decoder import _form_rings_bilocally
from selfies.mol_graph import MolecularGraph
from selfies.utils.smiles_utils import mol_to_smiles

RDLogger.DisableLog("rdApp.*")

ROOT = pathlib.Path(__file__).resolve().parents[2]

ATOMS = ["[C]", "[=C]", "[#C]", "[N]", "[=N]", "[#N]", "[O]", "[=O]",
         "[S]", "[=S]", "[#S]", "[P]", "[=P]", "[#P]", "[F]", "[Cl]", "[Br]"]
STRUCT = ["[Branch1]", "[=Branch1]", "[Ring1]", "[=Ring1]"]
INDEX = ["[Idx%d]" % i for i in range(16)]
DEFAULT_ALPHABET = ATOMS + STRUCT + INDEX + ["[STOP]"]
EXTENDED = ["[#Branch1]", "[Branch2]", "[=Branch2]", "[#Branch2]",
            "[Ring2]", "[=Ring2]", "[#Ring1]", "[#Ring2]"]


def index_value(sym):
    if sym is None:
        return 0
    if sym.startswith("[Idx"):
        return int(sym[4:-1])
    return gr.INDEX_CODE.get(sym, 0)


def read_index(it, n):
    vals = []
    for _ in range(n):
        try:
            vals.append(index_value(next(it)))
        except StopIteration:
            vals.append(0)
    q = 0
    for v in vals:
        q = q * 16 + v
    return q


def derive(it, mol, max_derive, init_state, root_atom, rings):
    n_derived = 0
    state = init_state
    prev_atom = root_atom
    while state is not None and n_derived < max_derive:
        try:
            symbol = next(it)
            n_derived += 1
        except StopIteration:
            break

        if symbol.startswith("[Idx"):
            continue  # stray index token

        if "ch" == symbol[-4:-2]:
            btype, n = gr.process_branch_symbol(symbol)
            if state <= 1:
                next_state = state
            else:
                binit, next_state = gr.next_branch_state(btype, state)
                q = read_index(it, n)
                n_derived += n + derive(it, mol, q + 1, binit, prev_atom, rings)
        elif "ng" == symbol[-4:-2]:
            ring_type, n, stereo = gr.process_ring_symbol(symbol)
            if state == 0:
                next_state = state
            else:
                order, next_state = gr.next_ring_state(ring_type, state)
                q = read_index(it, n)
                n_derived += n
                lidx = max(0, prev_atom.index - (q + 1))
                rings.append((mol.get_atom(lidx), prev_atom, (order, stereo)))
        else:
            (bond_order, stereo), atom = gr.process_atom_symbol(symbol)
            cap = atom.bonding_capacity
            bond_order, next_state = gr.next_atom_state(bond_order, cap, state)
            if bond_order == 0:
                if state == 0:
                    mol.add_atom(atom, True)
            else:
                mol.add_atom(atom)
                mol.add_bond(src=prev_atom.index, dst=atom.index,
                             order=bond_order, stereo=stereo)
            prev_atom = atom

        if next_state is None:
            break
        state = next_state

    while n_derived < max_derive:
        try:
            next(it)
            n_derived += 1
        except StopIteration:
            break
    return n_derived


def split(text):
    return ["[" + s for s in text.split("[") if s]


def reference_decode(text):
    symbols = split(text)
    if "[STOP]" in symbols:
        symbols = symbols[:symbols.index("[STOP]")]
    mol = MolecularGraph()
    rings = []
    derive(iter(symbols), mol, float("inf"), 0, None, rings)
    _form_rings_bilocally(mol, rings)
    return mol_to_smiles(mol)


def expected(text):
    smiles = reference_decode(text)
    m = Chem.MolFromSmiles(smiles, sanitize=False)
    flags = Chem.SanitizeFlags.SANITIZE_ALL ^ Chem.SanitizeFlags.SANITIZE_SETAROMATICITY \
        ^ Chem.SanitizeFlags.SANITIZE_KEKULIZE
    Chem.SanitizeMol(m, flags)
    orders = [0, 0, 0]
    for b in m.GetBonds():
        orders[int(b.GetBondTypeAsDouble()) - 1] += 1
    formula = rdMolDescriptors.CalcMolFormula(m) if m.GetNumAtoms() else ""
    return formula, m.GetNumAtoms(), m.GetNumBonds(), orders


def random_string(rng, alphabet, max_len):
    out = []
    for _ in range(max_len):
        tok = rng.choice(alphabet)
        out.append(tok)
        if tok == "[STOP]":
            break
    return "".join(out)


def main():
    rng = random.Random(20240531)
    lines = [
        "[C][C]", "[C][=C]", "[F][=C]", "[C][C][O]", "[C][F][C]",
        "[C][C][C][C][C][C][Ring1][=Branch1]",
        "[C][C][Branch1][C][O][C]", "[C][Branch1][Idx0][O][C]",
        "[S][S][S][S][STOP]", "[O][=O]", "[N][#N]", "[C][#C][C]",
        "[C][=C][C][=C][C][=C][Ring1][=Branch1]",
        "[P][Branch1][Idx2][Br][Cl][F][C]",
        "[C][Ring1][C]", "[Ring1][C][C]", "[Branch1][C][C][C]",
    ]
    while len(lines) < 520:
        s = random_string(rng, DEFAULT_ALPHABET, rng.randint(1, 35))
        if s and s != "[STOP]":
            lines.append(s)
    # Real-SELFIES index reads and the longer branch/ring families.
    wide = ATOMS + STRUCT + EXTENDED + INDEX[:4]
    while len(lines) < 640:
        lines.append(random_string(rng, wide, rng.randint(2, 35)))

    corpus = ROOT / "data" / "selfies_corpus.txt"
    expected_path = ROOT / "data" / "selfies_corpus.expected.tsv"
    bonds_path = ROOT / "data" / "selfies_corpus.bonds.tsv"
    with open(corpus, "w") as fc, open(expected_path, "w") as fe, \
            open(bonds_path, "w") as fb:
        for line in lines:
            formula, natoms, nbonds, orders = expected(line)
            fc.write(line + "\n")
            fe.write("%s\t%d\t%d\n" % (formula, natoms, nbonds))
            fb.write("%d\t%d\t%d\n" % tuple(orders))
    print("wrote %d corpus lines" % len(lines), file=sys.stderr)


if __name__ == "__main__":
    main()
