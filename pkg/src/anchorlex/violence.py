"""Rule-based matcher for violence-promoting verb/object patterns.

Lexical classes hold normalized Arabic stems; a closed affix table
expands them to surface forms (auditable by construction, and cheap:
overgenerated forms that never occur in text cost nothing). Two rule
shapes: an expanded verb followed within a small token gap by an
expanded object (V_THEN_O), and a hitting noun + "on" + body part
(HITNOUN_ON_BODY).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Sequence

from .textnorm import NormalizationConfig, normalize, tokenize
from .util import atomic_write_text

CLASS_NAMES = ("head", "body", "human", "verb_kill", "verb_hit", "verb_cut", "hit_noun")
_VERB_CLASSES = frozenset({"verb_kill", "verb_hit", "verb_cut"})
_NOUN_CLASSES = frozenset({"head", "body", "hit_noun"})

V_THEN_O = "V_then_O"
HITNOUN_ON_BODY = "HITNOUN_ON_BODY"

_NORM = NormalizationConfig()

# "on" (preposition), normalized: alef maksura -> yaa
ON_TOKEN = normalize("على", _NORM)  # على -> علي


@dataclass(frozen=True)
class LexicalClass:
    name: str
    members: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.name not in CLASS_NAMES:
            raise ValueError(f"unknown lexical class {self.name!r}")
        if not self.members:
            raise ValueError(f"class {self.name!r} has no members")


@dataclass(frozen=True)
class PatternRule:
    name: str
    shape: str
    verb_class: str  # the trigger class; a hit_noun for HITNOUN_ON_BODY
    object_classes: tuple[str, ...]
    max_gap: int = 2

    def __post_init__(self) -> None:
        if self.shape not in (V_THEN_O, HITNOUN_ON_BODY):
            raise ValueError(f"unknown rule shape {self.shape!r}")
        if self.max_gap < 0:
            raise ValueError("max_gap must be >= 0")
        if not self.object_classes:
            raise ValueError(f"rule {self.name!r} has no object classes")


@dataclass(frozen=True)
class ExpansionTable:
    """Closed affix inventory; expansion size is a fixed function of it."""

    # pure prepends: conjunctions, tense/aspect markers, their combos
    verb_prefixes: tuple[str, ...] = (
        "و", "ف", "س", "ب", "ح", "وس", "وب", "وح", "فس", "فب", "فح",
    )
    # substituted for the leading imperfect yaa of a verb stem, giving
    # first/second/plural person variants (hamza already normalized to alef)
    person_markers: tuple[str, ...] = ("ا", "ن", "ت", "ي")
    noun_prefixes: tuple[str, ...] = ("و", "ف", "ال", "بال", "عال")
    noun_suffixes: tuple[str, ...] = ("ك", "كم", "كن", "ه", "ها", "هم", "ي", "نا")
    # object pronouns that attach directly to a verb token ("I will kill you")
    object_pronoun_suffixes: tuple[str, ...] = ("ك", "كم", "كن", "ه", "ها", "هم")


def _verb_variants(stem: str, table: ExpansionTable) -> set[str]:
    variants = {stem}
    if stem.startswith("ي") and len(stem) > 2:
        variants.update(m + stem[1:] for m in table.person_markers)
    return variants


def expand(stem: str, kind: str, table: ExpansionTable = ExpansionTable()) -> frozenset[str]:
    """All surface forms of one normalized stem.

    kind "verb": person variants of a yaa-initial stem, then every verb
    prefix. kind "noun": every noun prefix x every pronoun suffix; a stem
    ending in taa-marbuta (heh after normalization) also contributes the
    -t- connective form before suffixes (raqaba+ka -> raqabatka). kind
    "literal": the stem itself only.
    """
    stem = normalize(stem, _NORM)
    if not stem:
        raise ValueError("empty stem")
    if kind == "verb":
        variants = _verb_variants(stem, table)
        forms = set(variants)
        forms.update(p + v for p in table.verb_prefixes for v in variants)
        return frozenset(forms)
    if kind == "noun":
        bases = {stem}
        suffix_bases = {stem}
        if stem.endswith(("ه", "ة")):
            # ambiguous after taa-marbuta folding; generate both joins
            suffix_bases.add(stem[:-1] + "ت")
        forms = set()
        for p in ("", *table.noun_prefixes):
            for b in bases:
                forms.add(p + b)
            for s in table.noun_suffixes:
                for b in suffix_bases:
                    forms.add(p + b + s)
        return frozenset(forms)
    if kind == "literal":
        return frozenset({stem})
    raise ValueError(f"unknown expansion kind {kind!r}")


def kind_of(class_name: str) -> str:
    if class_name in _VERB_CLASSES:
        return "verb"
    if class_name in _NOUN_CLASSES:
        return "noun"
    return "literal"  # human: standalone pronouns match as-is


def default_classes() -> dict[str, LexicalClass]:
    ref = resources.files("anchorlex.data").joinpath("violence_classes.tsv")
    with resources.as_file(ref) as p:
        return load_classes(str(p))


def default_rules() -> tuple[PatternRule, ...]:
    ref = resources.files("anchorlex.data").joinpath("violence_rules.tsv")
    with resources.as_file(ref) as p:
        return load_rules(str(p))


def load_classes(path: str) -> dict[str, LexicalClass]:
    """Classes TSV: name<TAB>member1,member2,...; members normalized on load."""
    out: dict[str, LexicalClass] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise ValueError(f"{path}: line {lineno}: expected name<TAB>members")
            name = cols[0].strip()
            if name in out:
                raise ValueError(f"{path}: line {lineno}: duplicate class {name!r}")
            members = tuple(
                normalize(m.strip(), _NORM) for m in cols[1].split(",") if m.strip()
            )
            try:
                out[name] = LexicalClass(name=name, members=members)
            except ValueError as e:
                raise ValueError(f"{path}: line {lineno}: {e}") from None
    if not out:
        raise ValueError(f"{path}: no classes defined")
    return out


def load_rules(path: str) -> tuple[PatternRule, ...]:
    """Rules TSV: name<TAB>shape<TAB>verb_class<TAB>objects(comma)<TAB>max_gap."""
    rules: list[PatternRule] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 5:
                raise ValueError(f"{path}: line {lineno}: expected 5 columns")
            try:
                rules.append(
                    PatternRule(
                        name=cols[0].strip(),
                        shape=cols[1].strip(),
                        verb_class=cols[2].strip(),
                        object_classes=tuple(
                            c.strip() for c in cols[3].split(",") if c.strip()
                        ),
                        max_gap=int(cols[4]),
                    )
                )
            except ValueError as e:
                raise ValueError(f"{path}: line {lineno}: {e}") from None
    if not rules:
        raise ValueError(f"{path}: no rules defined")
    return tuple(rules)


@dataclass(frozen=True)
class PatternMatch:
    rule: str
    start: int  # token index of the trigger
    end: int  # one past the object token
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class CompiledRules:
    rules: tuple[PatternRule, ...]
    expansions: Mapping[str, frozenset[str]]
    table: ExpansionTable = field(default_factory=ExpansionTable)


def compile_rules(
    rules: Sequence[PatternRule] | None = None,
    classes: Mapping[str, LexicalClass] | None = None,
    table: ExpansionTable = ExpansionTable(),
) -> CompiledRules:
    rules = tuple(rules) if rules is not None else default_rules()
    classes = dict(classes) if classes is not None else default_classes()
    needed = {r.verb_class for r in rules} | {
        c for r in rules for c in r.object_classes
    }
    missing = needed - set(classes)
    if missing:
        raise ValueError(f"rules reference undefined classes {sorted(missing)}")
    expansions = {
        name: frozenset(
            form
            for stem in cls.members
            for form in expand(stem, kind_of(name), table)
        )
        for name, cls in classes.items()
    }
    return CompiledRules(rules=rules, expansions=expansions, table=table)


def _match_object(token: str, rule: PatternRule, compiled: CompiledRules) -> bool:
    for cls in rule.object_classes:
        if token in compiled.expansions[cls]:
            return True
    return False


def _verb_with_object_suffix(token: str, verb_forms: frozenset[str], table: ExpansionTable) -> bool:
    for suf in table.object_pronoun_suffixes:
        if len(token) > len(suf) and token.endswith(suf) and token[: -len(suf)] in verb_forms:
            return True
    return False


def match_violence(
    tokens: Sequence[str],
    compiled: CompiledRules | None = None,
) -> list[PatternMatch]:
    """All rule matches over a normalized token sequence.

    One match per (rule, trigger position), spanning to the nearest
    object. For rules whose objects include <human>, a verb carrying an
    attached object pronoun matches as a single token.
    """
    if compiled is None:
        compiled = _default_compiled()
    out: list[PatternMatch] = []
    n = len(tokens)
    for rule in compiled.rules:
        trigger_forms = compiled.expansions[rule.verb_class]
        takes_human = "human" in rule.object_classes
        for i, tok in enumerate(tokens):
            if rule.shape == V_THEN_O:
                if takes_human and _verb_with_object_suffix(
                    tok, trigger_forms, compiled.table
                ):
                    out.append(
                        PatternMatch(rule.name, i, i + 1, (tok,))
                    )
                    continue
                if tok not in trigger_forms:
                    continue
                for j in range(i + 1, min(n, i + 2 + rule.max_gap)):
                    if _match_object(tokens[j], rule, compiled):
                        out.append(
                            PatternMatch(rule.name, i, j + 1, tuple(tokens[i : j + 1]))
                        )
                        break
            else:  # HITNOUN_ON_BODY
                if tok not in trigger_forms:
                    continue
                span_end = None
                for j in range(i + 1, min(n, i + 2 + rule.max_gap)):
                    tj = tokens[j]
                    # contracted "on-the-X" carries the preposition inside
                    if _match_object(tj, rule, compiled) and tj.startswith("عال"):
                        span_end = j + 1
                        break
                    if tj == ON_TOKEN:
                        for k in range(j + 1, min(n, j + 2 + rule.max_gap)):
                            if _match_object(tokens[k], rule, compiled):
                                span_end = k + 1
                                break
                        break
                if span_end is not None:
                    out.append(
                        PatternMatch(
                            rule.name, i, span_end, tuple(tokens[i:span_end])
                        )
                    )
    out.sort(key=lambda m: (m.start, m.end, m.rule))
    return out


_COMPILED_CACHE: CompiledRules | None = None


def _default_compiled() -> CompiledRules:
    global _COMPILED_CACHE
    if _COMPILED_CACHE is None:
        _COMPILED_CACHE = compile_rules()
    return _COMPILED_CACHE


def match_violence_text(
    text: str,
    compiled: CompiledRules | None = None,
    cfg: NormalizationConfig = _NORM,
) -> list[PatternMatch]:
    """Normalize + tokenize, then match."""
    return match_violence(tokenize(normalize(text, cfg)), compiled)


def dump_matches(rows: Iterable[tuple[str, PatternMatch]]) -> str:
    lines = ["doc_id\trule\tstart\tend\tspan"]
    for doc_id, m in rows:
        lines.append(f"{doc_id}\t{m.rule}\t{m.start}\t{m.end}\t{' '.join(m.tokens)}")
    return "\n".join(lines) + "\n"


def write_matches(path: str, rows: Iterable[tuple[str, PatternMatch]]) -> None:
    atomic_write_text(path, dump_matches(rows))
