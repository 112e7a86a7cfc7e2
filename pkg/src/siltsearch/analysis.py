"""Text analysis for Ethiopic-script documents and queries.

The pipeline runs in a fixed order::

    tokenize -> normalize -> remove_stopwords -> stem -> expand_synonyms

and is shared between indexing and searching. Query analysis stops before
synonym expansion; expansion happens once, on the index side.

All resources (stop words, stem dictionary, synonym groups) are normalized
when an :class:`AnalyzerConfig` is built, so matching is done on normalized
forms only.
"""

from __future__ import annotations

import hashlib
import json
import re
import string
from dataclasses import dataclass, field, replace
from pathlib import Path
from types import MappingProxyType
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .errors import InputEncodingError, ResourceError

RawText = Union[str, bytes]

ETHIOPIC_PUNCTUATION = "".join(chr(c) for c in range(0x1360, 0x1369))
GUILLEMETS = "«»"

_SEPARATOR_CLASS = (
    r"\s"
    + re.escape(ETHIOPIC_PUNCTUATION)
    + GUILLEMETS
    + re.escape(string.punctuation)
)
_TOKEN_RE = re.compile(f"[^{_SEPARATOR_CLASS}]+")
_ASCII_LOWER = str.maketrans(string.ascii_uppercase, string.ascii_lowercase)


def is_separator(ch: str) -> bool:
    return (
        ch.isspace()
        or ch in ETHIOPIC_PUNCTUATION
        or ch in GUILLEMETS
        or ch in string.punctuation
    )


def _fidel_family(src_base: int, dst_base: int) -> dict[str, str]:
    # the seven vowel orders are laid out consecutively from the base syllable
    return {chr(src_base + i): chr(dst_base + i) for i in range(7)}


DEFAULT_FOLD_TABLE: Mapping[str, str] = MappingProxyType(
    {
        **_fidel_family(0x1210, 0x1200),  # ሐ -> ሀ
        **_fidel_family(0x1280, 0x1200),  # ኀ -> ሀ
        **_fidel_family(0x1220, 0x1230),  # ሠ -> ሰ
        **_fidel_family(0x12D0, 0x12A0),  # ዐ -> አ
        **_fidel_family(0x1340, 0x1338),  # ፀ -> ጸ
    }
)


@dataclass(frozen=True, slots=True)
class Token:
    """One analyzed term occurrence.

    ``offset_start``/``offset_end`` are byte offsets into the UTF-8 encoding
    of the source text. ``injected`` marks synonyms added by expansion; they
    share position and offsets with the token that triggered them.
    """

    text: str
    position: int
    offset_start: int
    offset_end: int
    injected: bool = False


def _decode(text: RawText) -> str:
    if isinstance(text, (bytes, bytearray, memoryview)):
        try:
            return bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputEncodingError(f"input is not valid UTF-8: {exc}") from None
    try:
        text.encode("utf-8")
    except UnicodeEncodeError as exc:
        raise InputEncodingError(f"input is not valid UTF-8: {exc}") from None
    return text


def _utf8_len(s: str) -> int:
    n = 0
    for ch in s:
        c = ord(ch)
        n += 1 if c < 0x80 else 2 if c < 0x800 else 3 if c < 0x10000 else 4
    return n


def tokenize(text: RawText) -> list[Token]:
    """Split text on whitespace, Ethiopic punctuation, guillemets and ASCII
    punctuation. Latin letters are lowercased (ASCII only)."""
    s = _decode(text)
    tokens = []
    char_pos = 0
    byte_pos = 0
    for i, m in enumerate(_TOKEN_RE.finditer(s)):
        start, end = m.span()
        byte_pos += _utf8_len(s[char_pos:start])
        surface = m.group()
        width = _utf8_len(surface)
        tokens.append(
            Token(surface.translate(_ASCII_LOWER), i, byte_pos, byte_pos + width)
        )
        byte_pos += width
        char_pos = end
    return tokens


def _translation(fold_table: Mapping[str, str]) -> dict[int, str]:
    return {ord(k): v for k, v in fold_table.items()}


def normalize(
    token: Token,
    fold_homophones: bool,
    fold_table: Mapping[str, str] = DEFAULT_FOLD_TABLE,
) -> Token:
    if not fold_homophones:
        return token
    folded = token.text.translate(_translation(fold_table))
    if folded == token.text:
        return token
    return replace(token, text=folded)


def remove_stopwords(tokens: Sequence[Token], stopwords: Iterable[str]) -> list[Token]:
    """Drop stop words and renumber the survivors' positions from 0."""
    stop = stopwords if isinstance(stopwords, (set, frozenset, StopwordList)) else set(stopwords)
    out = []
    for tok in tokens:
        if tok.text in stop:
            continue
        out.append(tok if tok.position == len(out) else replace(tok, position=len(out)))
    return out


def stem(token: Token, stem_dict: Mapping[str, str] | StemDictionary) -> Token:
    target = stem_dict.get(token.text)
    if target is None or target == token.text:
        return token
    return replace(token, text=target)


def expand_synonyms(tokens: Sequence[Token], synonyms: SynonymMap) -> list[Token]:
    """Inject the other members of each token's synonym group right after it."""
    out = []
    for tok in tokens:
        out.append(tok)
        for member in synonyms.others(tok.text):
            out.append(replace(tok, text=member, injected=True))
    return out


# -- resources ---------------------------------------------------------------


def _resource_lines(path) -> Iterator[tuple[int, str]]:
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                yield lineno, line
    except UnicodeDecodeError as exc:
        raise ResourceError(f"{path}: not valid UTF-8 ({exc})") from None
    except OSError as exc:
        raise ResourceError(f"{path}: {exc.strerror or exc}") from None


def _check_term(term: str, what: str) -> str:
    if not term:
        raise ResourceError(f"empty {what} entry")
    if any(is_separator(ch) for ch in term):
        raise ResourceError(f"{what} entry {term!r} contains a separator character")
    return term


class StopwordList:
    """A set of stop words. Entries are normalized by :class:`AnalyzerConfig`."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Iterable[str] = ()):
        self._entries = frozenset(_check_term(e.strip(), "stop word") for e in entries)

    @classmethod
    def load(cls, path) -> StopwordList:
        return cls(line for _, line in _resource_lines(path))

    def normalized(self, fn: Callable[[str], str]) -> StopwordList:
        return StopwordList(fn(e) for e in self._entries)

    @property
    def entries(self) -> frozenset[str]:
        return self._entries

    def __contains__(self, term) -> bool:
        return term in self._entries

    def __iter__(self):
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other):
        return isinstance(other, StopwordList) and self._entries == other._entries

    def __hash__(self):
        return hash(self._entries)

    def __repr__(self):
        return f"StopwordList({len(self._entries)} entries)"


class StemDictionary:
    """Surface form -> stem lookup table.

    Every stem must be a fixed point of the table (``stem(stem(w)) ==
    stem(w)``); a table that maps a stem onto something else is rejected.
    """

    __slots__ = ("_mapping",)

    def __init__(self, mapping: Mapping[str, str] | Iterable[tuple[str, str]] = ()):
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        table: dict[str, str] = {}
        for surface, target in items:
            surface = _check_term(surface, "stem dictionary")
            target = _check_term(target, "stem dictionary")
            if surface in table and table[surface] != target:
                raise ResourceError(
                    f"stem dictionary maps {surface!r} to both {table[surface]!r} and {target!r}"
                )
            table[surface] = target
        for surface, target in table.items():
            if table.get(target, target) != target:
                raise ResourceError(
                    f"stem {target!r} (from {surface!r}) is not a fixed point: "
                    f"it maps to {table[target]!r}"
                )
        self._mapping = MappingProxyType(table)

    @classmethod
    def load(cls, path) -> StemDictionary:
        pairs = {}
        for lineno, line in _resource_lines(path):
            parts = line.split("\t")
            if len(parts) != 2:
                raise ResourceError(f"{path}:{lineno}: expected 'surface<TAB>stem'")
            surface, target = parts[0].strip(), parts[1].strip()
            if surface in pairs:
                raise ResourceError(f"{path}:{lineno}: duplicate surface form {surface!r}")
            pairs[surface] = target
        return cls(pairs)

    def normalized(self, fn: Callable[[str], str]) -> StemDictionary:
        return StemDictionary((fn(k), fn(v)) for k, v in self._mapping.items())

    @property
    def mapping(self) -> Mapping[str, str]:
        return self._mapping

    def get(self, term, default=None):
        return self._mapping.get(term, default)

    def __call__(self, term: str) -> str:
        return self._mapping.get(term, term)

    def __len__(self):
        return len(self._mapping)

    def __eq__(self, other):
        return isinstance(other, StemDictionary) and dict(self._mapping) == dict(other._mapping)

    def __hash__(self):
        return hash(frozenset(self._mapping.items()))

    def __repr__(self):
        return f"StemDictionary({len(self._mapping)} entries)"


class SynonymMap:
    """Disjoint equivalence classes of terms.

    Input groups that share a member are merged, so membership is symmetric
    and transitive. Classes that collapse to a single term are dropped.
    """

    __slots__ = ("_groups", "_lookup")

    def __init__(self, groups: Iterable[Iterable[str]] = ()):
        parent: dict[str, str] = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for group in groups:
            members = [_check_term(m.strip(), "synonym") for m in group]
            for m in members:
                parent.setdefault(m, m)
            for m in members[1:]:
                ra, rb = find(members[0]), find(m)
                if ra != rb:
                    parent[rb] = ra

        classes: dict[str, set[str]] = {}
        for term in parent:
            classes.setdefault(find(term), set()).add(term)
        merged = sorted(
            (tuple(sorted(c)) for c in classes.values() if len(c) > 1)
        )
        self._groups = tuple(frozenset(c) for c in merged)
        self._lookup = {}
        for c, frozen in zip(merged, self._groups):
            for term in c:
                # other members, pre-sorted so expansion order is deterministic
                self._lookup[term] = tuple(m for m in c if m != term)

    @classmethod
    def load(cls, path) -> SynonymMap:
        return cls(
            [m for m in (p.strip() for p in line.split(",")) if m]
            for _, line in _resource_lines(path)
        )

    def normalized(self, fn: Callable[[str], str]) -> SynonymMap:
        return SynonymMap([fn(m) for m in g] for g in self._groups)

    @property
    def groups(self) -> tuple[frozenset[str], ...]:
        return self._groups

    def group_of(self, term: str) -> frozenset[str] | None:
        others = self._lookup.get(term)
        if others is None:
            return None
        return frozenset((term, *others))

    def others(self, term: str) -> tuple[str, ...]:
        return self._lookup.get(term, ())

    def __len__(self):
        return len(self._groups)

    def __eq__(self, other):
        return isinstance(other, SynonymMap) and self._groups == other._groups

    def __hash__(self):
        return hash(self._groups)

    def __repr__(self):
        return f"SynonymMap({len(self._groups)} groups)"


def load_fold_table(path) -> dict[str, str]:
    table = {}
    for lineno, line in _resource_lines(path):
        parts = line.split("\t")
        if len(parts) != 2 or len(parts[0]) != 1 or len(parts[1]) != 1:
            raise ResourceError(f"{path}:{lineno}: expected 'fromChar<TAB>toChar'")
        table[parts[0]] = parts[1]
    return validate_fold_table(table)


def validate_fold_table(table: Mapping[str, str]) -> dict[str, str]:
    table = dict(table)
    for src, dst in table.items():
        if len(src) != 1 or len(dst) != 1:
            raise ResourceError(f"fold table entries must be single characters: {src!r}->{dst!r}")
        if is_separator(src) or is_separator(dst):
            raise ResourceError(f"fold table entry {src!r}->{dst!r} involves a separator")
        # folding must be idempotent, so targets are never themselves folded
        if table.get(dst, dst) != dst:
            raise ResourceError(f"fold table target {dst!r} is itself folded to {table[dst]!r}")
    return table


# -- configuration -------------------------------------------------------------

FINGERPRINT_VERSION = 1


@dataclass(frozen=True)
class AnalyzerConfig:
    """Immutable analysis configuration.

    Resources are normalized on construction: stop words and stem entries go
    through ASCII lowercasing and homophone folding, synonym members
    additionally through the stemmer when stemming is enabled. ``fingerprint``
    is a SHA-256 digest over every setting that affects analysis output.
    """

    fold_homophones: bool = True
    enable_stemming: bool = True
    enable_synonyms: bool = True
    stopwords: StopwordList = field(default_factory=StopwordList)
    stem_dict: StemDictionary = field(default_factory=StemDictionary)
    synonyms: SynonymMap = field(default_factory=SynonymMap)
    fold_table: Mapping[str, str] = DEFAULT_FOLD_TABLE
    fingerprint: str = field(init=False)

    def __post_init__(self):
        table = MappingProxyType(validate_fold_table(self.fold_table))
        set_ = object.__setattr__
        set_(self, "fold_table", table)
        set_(self, "_translation", _translation(table))
        stopwords = self.stopwords
        if not isinstance(stopwords, StopwordList):
            stopwords = StopwordList(stopwords)
        stem_dict = self.stem_dict
        if not isinstance(stem_dict, StemDictionary):
            stem_dict = StemDictionary(stem_dict)
        synonyms = self.synonyms
        if not isinstance(synonyms, SynonymMap):
            synonyms = SynonymMap(synonyms)
        norm = self.normalize_term
        set_(self, "stopwords", stopwords.normalized(norm))
        set_(self, "stem_dict", stem_dict.normalized(norm))
        if self.enable_stemming:
            stemmer = self.stem_dict
            set_(self, "synonyms", synonyms.normalized(lambda t: stemmer(norm(t))))
        else:
            set_(self, "synonyms", synonyms.normalized(norm))
        set_(self, "fingerprint", self._digest())

    def __hash__(self):
        return hash(self.fingerprint)

    def normalize_term(self, term: str) -> str:
        """Normalize a bare term exactly as a token would be."""
        term = term.translate(_ASCII_LOWER)
        if self.fold_homophones:
            term = term.translate(self._translation)
        return term

    def _digest(self) -> str:
        payload = {
            "version": FINGERPRINT_VERSION,
            "fold_homophones": self.fold_homophones,
            "fold_table": sorted(self.fold_table.items()) if self.fold_homophones else [],
            "stopwords": sorted(self.stopwords),
            "enable_stemming": self.enable_stemming,
            "stem_dict": sorted(self.stem_dict.mapping.items()) if self.enable_stemming else [],
            "enable_synonyms": self.enable_synonyms,
            "synonyms": [sorted(g) for g in self.synonyms.groups] if self.enable_synonyms else [],
        }
        blob = json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    @classmethod
    def from_files(
        cls,
        stopwords: str | Path | None = None,
        stem_dict: str | Path | None = None,
        synonyms: str | Path | None = None,
        fold_table: str | Path | None = None,
        *,
        fold_homophones: bool = True,
        enable_stemming: bool = True,
        enable_synonyms: bool = True,
    ) -> AnalyzerConfig:
        return cls(
            fold_homophones=fold_homophones,
            enable_stemming=enable_stemming,
            enable_synonyms=enable_synonyms,
            stopwords=StopwordList.load(stopwords) if stopwords else StopwordList(),
            stem_dict=StemDictionary.load(stem_dict) if stem_dict else StemDictionary(),
            synonyms=SynonymMap.load(synonyms) if synonyms else SynonymMap(),
            fold_table=load_fold_table(fold_table) if fold_table else DEFAULT_FOLD_TABLE,
        )


STAGES = ("tokenize", "normalize", "stopwords", "stem", "synonyms")


def analysis_stages(
    text: RawText, config: AnalyzerConfig, at_query_time: bool = False
) -> list[tuple[str, list[Token], bool]]:
    """Run the pipeline and keep every intermediate stream.

    Returns ``(stage, tokens, active)`` triples in pipeline order; inactive
    stages pass their input through unchanged.
    """
    stages = []
    tokens = tokenize(text)
    stages.append(("tokenize", tokens, True))
    if config.fold_homophones:
        table = config.fold_table
        tokens = [normalize(t, True, table) for t in tokens]
    stages.append(("normalize", tokens, config.fold_homophones))
    tokens = remove_stopwords(tokens, config.stopwords)
    stages.append(("stopwords", tokens, True))
    if config.enable_stemming:
        tokens = [stem(t, config.stem_dict) for t in tokens]
    stages.append(("stem", tokens, config.enable_stemming))
    expand = config.enable_synonyms and not at_query_time
    if expand:
        tokens = expand_synonyms(tokens, config.synonyms)
    stages.append(("synonyms", tokens, expand))
    return stages


def analyze(text: RawText, config: AnalyzerConfig, at_query_time: bool = False) -> list[Token]:
    return analysis_stages(text, config, at_query_time)[-1][1]


def analyze_terms(text: RawText, config: AnalyzerConfig, at_query_time: bool = False) -> list[str]:
    return [t.text for t in analyze(text, config, at_query_time)]
