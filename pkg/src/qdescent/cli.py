"""Command-line front end: parse problem files, run decisions, report.

The problem-file grammar is line oriented with # comment lines:

    class.pbar    = (t1,d1)(t2,d2)...        # () for the trivial morphism
    class.sign    = ram{p1,p2,...} | ram{} | symbol(a,b)    # oo allowed
    algebra       = symbol(a,b)
    field         = Q | Q(sqrt t1, sqrt t2, ...)
    command       = decide | decide-with-endos L=<field> | kp | minimal-fields | decompose
    certificate <name>:
      minpoly     = <integer coefficients, ascending>
      group       = C<n> | V4 | D<2n>
      ramified    = <prime support of the field discriminant>
      gen <label> = <coordinate vector of the generator image>
      embed <name> = <coordinate vector>
      lambda <subgroup-gens>: <elt> <elt> ...   # one per subgroup element
      normfact <subgroup-gens>: element=<elt> isnorm=<true|false> source=<witness <elt>|oracle "<note>">

Vectors are comma separated rationals without spaces; a bare rational is the
rational element.  Subgroup generators are words like s^2,t.  Exit codes:
0 defined, 1 not defined, 2 undecided, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from importlib import resources
from typing import Optional

from .delta import CocycleSign, GammaClass, PMorphism, SymbolicSign
from .descent import (
    Candidate,
    CertificateError,
    ExtensionCertificate,
    ExtensionExistenceQuestion,
    LambdaWitness,
    NormFact,
    NormQuestion,
    Verdict,
    decide,
    decide_with_endos,
    kp_field,
    minimal_fields_with_endos,
    restrict_gamma,
)
from .groups import cyclic_group, dihedral_group, klein_group, parse_word, subgroup
from .numfield import FieldAutomorphism, NumberField, action_homomorphism
from .qarith import (
    INFINITY,
    Place,
    PolyquadraticField,
    QQ,
    QuaternionClass,
    QuaternionSymbol,
    SquareClass,
    ramification_set,
    squarefree_reduce,
)


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class CommandSpec:
    name: str
    L: Optional[PolyquadraticField] = None


@dataclass
class ProblemFile:
    gamma: GammaClass
    algebra: QuaternionSymbol
    field: PolyquadraticField
    command: CommandSpec
    certificates: list[ExtensionCertificate] = dc_field(default_factory=list)
    warnings: list[str] = dc_field(default_factory=list)


def _parse_rational(tok: str, line_no: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(line_no, f"bad rational {tok!r}: {exc}") from exc


def _parse_vector(tok: str, line_no: int) -> tuple[Fraction, ...]:
    return tuple(_parse_rational(p, line_no) for p in tok.split(","))


def _reduce_with_warning(value: Fraction, what: str, line_no: int,
                         warnings: list[str]) -> SquareClass:
    if value == 0:
        raise ParseError(line_no, f"{what} must be nonzero")
    cls = squarefree_reduce(value)
    if cls.value != value:
        warnings.append(f"line {line_no}: {what} {value} reduced to squarefree {cls.value}")
    return cls


_PAIR_RE = re.compile(r"\(([^()]*)\)")


def _parse_pbar(text: str, line_no: int, warnings: list[str]) -> list[tuple[SquareClass, SquareClass]]:
    text = text.strip()
    if text == "()":
        return []
    if not text or text.replace(" ", "") == "":
        raise ParseError(line_no, "class.pbar needs (t,d) pairs or ()")
    consumed = "".join(_PAIR_RE.findall(text.replace(" ", "")))
    if "(" + ")(".join(_PAIR_RE.findall(text.replace(" ", ""))) + ")" != text.replace(" ", ""):
        raise ParseError(line_no, f"malformed pbar expression {text!r}")
    pairs = []
    for body in _PAIR_RE.findall(text.replace(" ", "")):
        parts = body.split(",")
        if len(parts) != 2:
            raise ParseError(line_no, f"pbar pair ({body}) needs exactly t,d")
        t = _reduce_with_warning(_parse_rational(parts[0], line_no), "pbar character", line_no, warnings)
        d = _reduce_with_warning(_parse_rational(parts[1], line_no), "pbar value", line_no, warnings)
        pairs.append((t, d))
    return pairs


def _parse_sign(text: str, line_no: int, warnings: list[str]) -> QuaternionClass:
    text = text.strip()
    if text.startswith("ram{") and text.endswith("}"):
        body = text[4:-1].strip()
        if not body:
            return QuaternionClass(frozenset())
        places = []
        for tok in body.split(","):
            tok = tok.strip()
            if tok == "oo":
                places.append(INFINITY)
            else:
                try:
                    places.append(Place(int(tok)))
                except ValueError as exc:
                    raise ParseError(line_no, f"bad place {tok!r}: {exc}") from exc
        if len(places) != len(set(places)):
            raise ParseError(line_no, "repeated place in ramification set")
        try:
            return QuaternionClass(frozenset(places))
        except ValueError as exc:
            raise ParseError(line_no, str(exc)) from exc
    sym = _parse_symbol(text, line_no, warnings)
    if sym is not None:
        return ramification_set(sym)
    raise ParseError(line_no, f"class.sign must be ram{{...}} or symbol(a,b), got {text!r}")


_SYMBOL_RE = re.compile(r"^symbol\(([^,()]+),([^,()]+)\)$")


def _parse_symbol(text: str, line_no: int, warnings: list[str]) -> Optional[QuaternionSymbol]:
    m = _SYMBOL_RE.match(text.replace(" ", ""))
    if not m:
        return None
    a = _reduce_with_warning(_parse_rational(m.group(1), line_no), "symbol entry", line_no, warnings)
    b = _reduce_with_warning(_parse_rational(m.group(2), line_no), "symbol entry", line_no, warnings)
    return QuaternionSymbol(a, b)


def _parse_field(text: str, line_no: int) -> PolyquadraticField:
    text = text.strip()
    if text == "Q":
        return QQ
    m = re.match(r"^Q\((.*)\)$", text)
    if not m:
        raise ParseError(line_no, f"field must be Q or Q(sqrt t, ...), got {text!r}")
    gens = []
    for part in m.group(1).split(","):
        part = part.strip()
        if not part.startswith("sqrt"):
            raise ParseError(line_no, f"field generator {part!r} must look like 'sqrt t'")
        val = _parse_rational(part[4:].strip(), line_no)
        cls = squarefree_reduce(val)
        if cls.is_one():
            raise ParseError(line_no, f"field generator {val} is a square")
        gens.append(cls)
    try:
        return PolyquadraticField(gens)
    except ValueError as exc:
        raise ParseError(line_no, str(exc)) from exc


def _parse_command(text: str, line_no: int) -> CommandSpec:
    text = text.strip()
    if text in ("decide", "kp", "minimal-fields", "decompose"):
        return CommandSpec(text)
    if text.startswith("decide-with-endos"):
        rest = text[len("decide-with-endos"):].strip()
        if not rest.startswith("L="):
            raise ParseError(line_no, "decide-with-endos needs L=<field>")
        return CommandSpec("decide-with-endos", _parse_field(rest[2:].strip(), line_no))
    raise ParseError(line_no, f"unknown command {text!r}")


_GROUPS = {"V4": klein_group}


def _parse_group(text: str, line_no: int):
    text = text.strip()
    if text == "V4":
        return klein_group()
    m = re.match(r"^C(\d+)$", text)
    if m:
        return cyclic_group(int(m.group(1)))
    m = re.match(r"^D(\d+)$", text)
    if m:
        order = int(m.group(1))
        if order % 2 or order < 6:
            raise ParseError(line_no, f"dihedral keyword D{order} must be D<2n> with n >= 3")
        return dihedral_group(order // 2)
    raise ParseError(line_no, f"unknown group keyword {text!r}")


class _CertBuilder:
    def __init__(self, name: str, line_no: int):
        self.name = name
        self.line_no = line_no
        self.minpoly = None
        self.group = None
        self.ram: tuple[int, ...] = ()
        self.gens: dict[str, tuple[Fraction, ...]] = {}
        self.embeds: dict[str, tuple[Fraction, ...]] = {}
        self.lambdas: list[tuple[str, list[tuple[Fraction, ...]], int]] = []
        self.normfacts: list[dict] = []

    def build(self) -> ExtensionCertificate:
        ln = self.line_no
        if self.minpoly is None:
            raise ParseError(ln, f"certificate {self.name}: missing minpoly")
        if self.group is None:
            raise ParseError(ln, f"certificate {self.name}: missing group")
        try:
            nf = NumberField(self.minpoly, name=self.name)
        except ValueError as exc:
            raise ParseError(ln, f"certificate {self.name}: {exc}") from exc

        def elem(vec, where):
            if len(vec) == 1:
                return nf.rational(vec[0])
            if len(vec) != nf.degree:
                raise ParseError(where, f"vector needs {nf.degree} coordinates, got {len(vec)}")
            return nf.element(vec)

        images = {}
        for label, vec in self.gens.items():
            try:
                idx = self.group.generator_index(label)
            except KeyError as exc:
                raise ParseError(ln, f"certificate {self.name}: {exc}") from exc
            try:
                images[idx] = FieldAutomorphism(nf, elem(vec, ln), name=label)
            except ValueError as exc:
                raise ParseError(ln, f"certificate {self.name}: gen {label}: {exc}") from exc
        if set(images) != set(self.group.generators):
            raise ParseError(ln, f"certificate {self.name}: need gen lines for all group generators")
        try:
            action = action_homomorphism(self.group, images)
        except ValueError as exc:
            raise ParseError(ln, f"certificate {self.name}: {exc}") from exc
        embeddings = {nm: elem(vec, ln) for nm, vec in self.embeds.items()}

        lams = []
        for gens_text, vecs, where in self.lambdas:
            gen_elems = tuple(parse_word(self.group, w) for w in gens_text.split(","))
            H, emb = subgroup(self.group, gen_elems)
            if len(vecs) != H.order:
                raise ParseError(where,
                                 f"lambda needs {H.order} elements for subgroup <{gens_text}>, got {len(vecs)}")
            lams.append(LambdaWitness(gen_elems, tuple(elem(v, where) for v in vecs)))

        facts = []
        for nfact in self.normfacts:
            gen_elems = tuple(parse_word(self.group, w) for w in nfact["gens"].split(","))
            facts.append(NormFact(
                gen_elems,
                elem(nfact["element"], nfact["line"]),
                nfact["isnorm"],
                nfact["provenance"],
                witness=elem(nfact["witness"], nfact["line"]) if nfact.get("witness") else None,
                note=nfact.get("note", ""),
            ))
        return ExtensionCertificate(self.name, nf, self.group, action, embeddings,
                                    self.ram, lams, facts)


_NORMFACT_RE = re.compile(
    r"^element=(?P<element>\S+)\s+isnorm=(?P<isnorm>true|false)\s+source=(?P<source>.+)$"
)


def parse_problem(text: str) -> ProblemFile:
    """Parse and semantically validate a problem file."""
    warnings: list[str] = []
    pbar_pairs = sign = algebra = fld = command = None
    builders: list[_CertBuilder] = []
    current: Optional[_CertBuilder] = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        header = re.match(r"^certificate\s+(\S+):$", line)
        if header:
            current = _CertBuilder(header.group(1), line_no)
            builders.append(current)
            continue
        if current is not None and re.match(r"^(minpoly|group|ramified|gen|embed|lambda|normfact)\b", line):
            _parse_cert_line(current, line, line_no)
            continue
        current = None
        if "=" not in line:
            raise ParseError(line_no, f"expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "class.pbar":
            pbar_pairs = _parse_pbar(value, line_no, warnings)
        elif key == "class.sign":
            sign = _parse_sign(value, line_no, warnings)
        elif key == "algebra":
            algebra = _parse_symbol(value, line_no, warnings)
            if algebra is None:
                raise ParseError(line_no, f"algebra must be symbol(a,b), got {value!r}")
        elif key == "field":
            fld = _parse_field(value, line_no)
        elif key == "command":
            command = _parse_command(value, line_no)
        else:
            raise ParseError(line_no, f"unknown key {key!r}")

    if pbar_pairs is None:
        raise ParseError(0, "missing class.pbar")
    if sign is None:
        raise ParseError(0, "missing class.sign")
    if algebra is None:
        raise ParseError(0, "missing algebra")
    if fld is None:
        raise ParseError(0, "missing field")
    if command is None:
        raise ParseError(0, "missing command")

    gamma = GammaClass(PMorphism(pbar_pairs, QQ), SymbolicSign(sign), QQ)
    certs = [b.build() for b in builders]
    return ProblemFile(gamma, algebra, fld, command, certs, warnings)


def _parse_cert_line(builder: _CertBuilder, line: str, line_no: int) -> None:
    if line.startswith(("lambda", "normfact")):
        head, colon, rest = line.partition(":")
        if not colon:
            raise ParseError(line_no, f"{line.split()[0]} line needs a ':'")
        parts = head.split(None, 1)
        if len(parts) != 2:
            raise ParseError(line_no, f"{parts[0]} line needs subgroup generators")
        kind, gens_text = parts[0], parts[1].strip().replace(" ", "")
        rest = rest.strip()
        if kind == "lambda":
            vecs = [_parse_vector(tok, line_no) for tok in rest.split()]
            builder.lambdas.append((gens_text, vecs, line_no))
            return
        m = _NORMFACT_RE.match(rest)
        if not m:
            raise ParseError(line_no, f"malformed normfact line: {rest!r}")
        fact = {"gens": gens_text, "line": line_no,
                "element": _parse_vector(m.group("element"), line_no),
                "isnorm": m.group("isnorm") == "true"}
        source = m.group("source").strip()
        if source.startswith("witness "):
            fact["provenance"] = "witness"
            fact["witness"] = _parse_vector(source[len("witness "):].strip(), line_no)
        elif source.startswith("oracle"):
            fact["provenance"] = "oracle"
            note = source[len("oracle"):].strip()
            if not (note.startswith('"') and note.endswith('"') and len(note) >= 2):
                raise ParseError(line_no, 'oracle source needs a quoted "note"')
            fact["note"] = note[1:-1]
        else:
            raise ParseError(line_no, f"normfact source must be witness <elt> or oracle \"note\"")
        builder.normfacts.append(fact)
        return
    if "=" not in line:
        raise ParseError(line_no, f"expected key = value in certificate, got {line!r}")
    key, _, value = line.partition("=")
    key = key.strip()
    value = value.strip()
    if key == "minpoly":
        builder.minpoly = _parse_vector(value, line_no)
    elif key == "group":
        builder.group = _parse_group(value, line_no)
    elif key == "ramified":
        try:
            builder.ram = tuple(int(p) for p in value.split(","))
        except ValueError as exc:
            raise ParseError(line_no, f"bad ramified list: {exc}") from exc
    elif key.startswith("gen "):
        builder.gens[key[4:].strip()] = _parse_vector(value, line_no)
    elif key.startswith("embed "):
        builder.embeds[key[6:].strip()] = _parse_vector(value, line_no)
    else:
        raise ParseError(line_no, f"unknown certificate key {key!r}")


# ---------------------------------------------------------------------------
# canonical serialization


def _fmt_rational(x: Fraction) -> str:
    return str(x)


def _fmt_vector(coords) -> str:
    return ",".join(_fmt_rational(c) for c in coords)


def _fmt_element(e) -> str:
    coords = e.coords
    if all(c == 0 for c in coords[1:]):
        return _fmt_rational(coords[0])
    return _fmt_vector(coords)


def _fmt_field(K: PolyquadraticField) -> str:
    if K.is_rational:
        return "Q"
    return "Q(%s)" % ", ".join(f"sqrt {g.value}" for g in K.generators)


def _fmt_sign(cls: QuaternionClass) -> str:
    return "ram{%s}" % ",".join(str(v) for v in cls.sorted_places())


def serialize_problem(problem: ProblemFile) -> str:
    """Canonical text of a problem: parse . serialize is the identity on
    canonical files."""
    lines = []
    pairs = sorted(problem.gamma.pbar.pairs,
                   key=lambda td: (abs(td[0].value), td[0].value < 0, td[1].value))
    lines.append("class.pbar = " + ("()" if not pairs else
                                    "".join(f"({t.value},{d.value})" for t, d in pairs)))
    lines.append("class.sign = " + _fmt_sign(problem.gamma.sign.ram))
    lines.append(f"algebra = symbol({problem.algebra.a.value},{problem.algebra.b.value})")
    lines.append("field = " + _fmt_field(problem.field))
    cmd = problem.command.name
    if problem.command.L is not None:
        cmd += " L=" + _fmt_field(problem.command.L)
    lines.append("command = " + cmd)
    for cert in problem.certificates:
        lines.append("")
        lines.append(f"certificate {cert.name}:")
        lines.append("  minpoly = " + _fmt_vector(cert.nf.minpoly))
        lines.append("  group = " + _group_keyword(cert.group))
        if cert.ram_support:
            lines.append("  ramified = " + ",".join(str(p) for p in cert.ram_support))
        for idx in cert.group.generators:
            label = cert.group.label(idx)
            lines.append(f"  gen {label} = " + _fmt_vector(cert.action[idx].image.coords))
        for nm in sorted(cert.embeddings):
            lines.append(f"  embed {nm} = " + _fmt_vector(cert.embeddings[nm].coords))
        for lam in cert.lambda_witnesses:
            gens_text = ",".join(cert.group.label(g) for g in lam.subgroup)
            lines.append(f"  lambda {gens_text}: " + " ".join(_fmt_element(v) for v in lam.values))
        for fact in cert.norm_facts:
            gens_text = ",".join(cert.group.label(g) for g in fact.subgroup)
            src = (f'witness {_fmt_element(fact.witness)}' if fact.provenance == "witness"
                   else f'oracle "{fact.note}"')
            lines.append(f"  normfact {gens_text}: element={_fmt_element(fact.element)} "
                         f"isnorm={'true' if fact.is_norm else 'false'} source={src}")
    return "\n".join(lines) + "\n"


def _group_keyword(G) -> str:
    if G == klein_group():
        return "V4"
    return G.name


# ---------------------------------------------------------------------------
# reports


def _obligation_json(ob) -> dict:
    if isinstance(ob, NormQuestion):
        return {"kind": "norm-question", "extension": ob.extension,
                "subfield": None if ob.subfield is None else ob.subfield.value,
                "element": str(ob.element), "text": ob.describe()}
    return {"kind": "extension-existence", "shape": ob.shape,
            "constraints": dict(ob.constraints), "text": ob.describe()}


def _candidate_json(cand: Candidate) -> dict:
    return {
        "params": cand.params,
        "outcome": cand.outcome,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in cand.checks],
        "obligations": [_obligation_json(ob) for ob in cand.obligations],
    }


def verdict_json(problem: ProblemFile, verdict: Verdict) -> dict:
    witness = None
    if verdict.witness is not None:
        w = verdict.witness
        sign = w.gamma.sign
        if isinstance(sign, SymbolicSign):
            sign_desc = _fmt_sign(sign.ram)
        else:
            sign_desc = {"cocycle-on": sign.cocycle.group.name, "extension": sign.extension}
        witness = {
            "shape": w.shape,
            "params": w.params,
            "certificate": w.certificate,
            "verification": w.verification,
            "delta": {
                "pbar": [[t.value, d.value] for t, d in w.gamma.pbar.canonical()],
                "sign": sign_desc,
            },
        }
    return {
        "command": problem.command.name,
        "field": _fmt_field(problem.field),
        "verdict": verdict.outcome,
        "exit_code": verdict.exit_code,
        "witness": witness,
        "case_log": [
            {"shape": case.shape, "outcome": case.outcome, "reason": case.reason,
             "candidates": [_candidate_json(c) for c in case.candidates]}
            for case in verdict.case_log
        ],
        "obligations": [_obligation_json(ob) for ob in verdict.obligations],
        "certificates": verdict.certificate_reports,
        "warnings": problem.warnings,
    }


def _print_human(problem: ProblemFile, verdict: Verdict, trace: bool, out) -> None:
    print(f"verdict: {verdict.outcome}", file=out)
    if verdict.witness is not None:
        w = verdict.witness
        params = " ".join(f"{k}={v}" for k, v in w.params.items())
        print(f"witness: {w.shape}" + (f": {params}" if params else ""), file=out)
        if w.certificate:
            print(f"  via certificate {w.certificate}", file=out)
        print(f"  verification: {w.verification}", file=out)
        sign = w.gamma.sign
        sign_desc = _fmt_sign(sign.ram) if isinstance(sign, SymbolicSign) else \
            f"cocycle on {sign.cocycle.group.name} (extension {sign.extension})"
        print(f"  delta(psi): pbar {w.gamma.pbar!r}, sign {sign_desc}", file=out)
    for case in verdict.case_log:
        print(f"shape {case.shape}: {case.outcome}: {case.reason}", file=out)
        if trace:
            for cand in case.candidates:
                print(f"  candidate {cand.params}: {cand.outcome}", file=out)
                for c in cand.checks:
                    print(f"    [{'ok' if c.passed else 'NO'}] {c.name}: {c.detail}", file=out)
    if verdict.obligations:
        print("obligations:", file=out)
        for ob in verdict.obligations:
            print(f"  {ob.describe()}", file=out)
    for rep in verdict.certificate_reports:
        note = f" ({rep['note']})" if rep.get("note") else ""
        print(f"certificate fact: {rep['fact']}: {rep['status']}{note}", file=out)
    for wmsg in problem.warnings:
        print(f"warning: {wmsg}", file=out)


def run(problem: ProblemFile, json_out: bool = False, trace: bool = False,
        verify_witness: bool = False, out=None) -> int:
    """Execute a parsed problem; returns the exit code."""
    out = out or sys.stdout
    cmd = problem.command.name
    if cmd in ("decide", "decide-with-endos"):
        if cmd == "decide":
            verdict = decide(problem.gamma, problem.algebra, problem.field,
                             problem.certificates, verify_witness=verify_witness)
        else:
            verdict = decide_with_endos(problem.gamma, problem.algebra,
                                        problem.field, problem.command.L,
                                        verify_witness=verify_witness)
        if json_out:
            print(json.dumps(verdict_json(problem, verdict), sort_keys=True, indent=2), file=out)
        else:
            _print_human(problem, verdict, trace, out)
        return verdict.exit_code

    if cmd == "kp":
        K = kp_field(problem.gamma.pbar)
        payload = {"command": "kp", "kp": _fmt_field(K)}
    elif cmd == "minimal-fields":
        rep = minimal_fields_with_endos(problem.gamma)
        payload = {
            "command": "minimal-fields",
            "kp": _fmt_field(rep.kp),
            "kp_splits_sign": rep.kp_splits_sign,
            "minimum": None if rep.minimum is None else _fmt_field(rep.minimum),
            "fields": [_fmt_field(f) for f in rep.fields],
        }
    else:  # decompose
        gK = restrict_gamma(problem.gamma, problem.field)
        payload = {
            "command": "decompose",
            "field": _fmt_field(problem.field),
            "pbar": [[t.value, d.value] for t, d in gK.pbar.canonical()],
            "sign": _fmt_sign(gK.sign.ram),
            "kp": _fmt_field(kp_field(problem.gamma.pbar)),
        }
    if json_out:
        print(json.dumps(payload, sort_keys=True, indent=2), file=out)
    else:
        for k, v in payload.items():
            print(f"{k}: {v}", file=out)
    return 0


def bundled_example(name: str) -> str:
    """Text of a bundled problem file, e.g. 'ex243'."""
    return resources.files("qdescent.data").joinpath(f"{name}.problem").read_text()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qdescent",
        description="decide fields of definition up to isogeny for quaternionic building blocks")
    parser.add_argument("problem", nargs="?",
                        help="problem file path, or @name for a bundled example (e.g. @ex243)")
    parser.add_argument("--json", action="store_true", help="machine-readable report")
    parser.add_argument("--trace", action="store_true", help="per-shape search trace")
    parser.add_argument("--verify-witness", action="store_true",
                        help="recheck any witness by brute-force quaternion arithmetic")
    parser.add_argument("--list-examples", action="store_true",
                        help="list the bundled example problems and exit")
    args = parser.parse_args(argv)

    if args.list_examples:
        for entry in sorted(resources.files("qdescent.data").iterdir(), key=lambda e: e.name):
            if entry.name.endswith(".problem"):
                print("@" + entry.name[: -len(".problem")])
        return 0
    if not args.problem:
        parser.print_usage(sys.stderr)
        return 3

    try:
        if args.problem.startswith("@"):
            text = bundled_example(args.problem[1:])
        else:
            with open(args.problem, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    try:
        problem = parse_problem(text)
        return run(problem, json_out=args.json, trace=args.trace,
                   verify_witness=args.verify_witness)
    except (ParseError, CertificateError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
