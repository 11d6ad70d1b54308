"""Command-line entry point.

    asap analyze <corpus-dir> [--config FILE] [--out DIR]
    asap structure <annotated-dir> [--config FILE] [--out DIR]
    asap diff --key FILE --response FILE --types T1,T2 [--beta W]

Exit status: 0 on success, 1 on partial failure (some documents failed,
or for ``diff`` some type scored below a strict F-measure of 1.0), 2 on a
fatal error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import warnings
from collections import Counter
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from html.parser import HTMLParser
from pathlib import Path
from typing import Dict, List, Optional

from . import __version__
from .config import Config, load_config
from .diff import STRICT, diff_report, render_records, render_text
from .document import DEFAULT_SET, Document, nestable_subset
from .errors import AsapError, EmptyCorpus, OverlapNotNestable
from .gazetteer import load_gazetteer
from .inline_xml import parse_inline_xml, serialize_annotations, serialize_inline_xml
from .jape import load_rules
from .pipeline import run_pipeline
from .structure import emit_pattern_xml, load_facet_mapping, structure_document

CORPUS_SUFFIXES = (".txt", ".html", ".htm", ".xml")
MANIFEST = "manifest.json"
FACET_FIRST = ("Problem", "Context", "Solution")


@dataclass
class DocumentRecord:
    input: str
    status: str = "ok"
    counts: Dict[str, int] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    error: Optional[str] = None
    valid: Optional[bool] = None
    validation: List[str] = field(default_factory=list)


@dataclass
class RunManifest:
    command: str
    toolkit_version: str
    config_digest: str
    created_at: str
    documents: List[DocumentRecord] = field(default_factory=list)

    @property
    def failed(self) -> List[DocumentRecord]:
        return [d for d in self.documents if d.status != "ok"]

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, ensure_ascii=False, sort_keys=True) + "\n"


class _TextExtractor(HTMLParser):
    BLOCK = {"p", "div", "br", "li", "ul", "ol", "tr", "table", "section", "article",
             "h1", "h2", "h3", "h4", "h5", "h6", "dt", "dd", "pre", "blockquote", "hr"}
    SKIP = {"script", "style", "head", "title"}

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.parts: List[str] = []
        self._skip = 0

    def handle_starttag(self, tag, attrs):
        if tag in self.SKIP:
            self._skip += 1
        elif tag in self.BLOCK:
            self.parts.append("\n")

    def handle_endtag(self, tag):
        if tag in self.SKIP:
            self._skip = max(0, self._skip - 1)
        elif tag in self.BLOCK:
            self.parts.append("\n")

    def handle_data(self, data):
        if not self._skip:
            self.parts.append(data)


def strip_markup(markup: str) -> str:
    parser = _TextExtractor()
    parser.feed(markup)
    parser.close()
    return "".join(parser.parts)


def write_atomic(path: Path, data: bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _new_manifest(command: str, config: Config) -> RunManifest:
    return RunManifest(command, __version__, config.digest(),
                       datetime.now(timezone.utc).isoformat(timespec="seconds"))


def _output_names(files: List[Path], suffix: str) -> Dict[Path, str]:
    stems = Counter(f.stem for f in files)
    return {f: (f.stem if stems[f.stem] == 1 else f.name) + suffix for f in files}


def load_text(path: Path, config: Config) -> str:
    text = path.read_bytes().decode("utf-8")
    suffix = path.suffix.lower()
    if suffix == ".xml" or (suffix in (".html", ".htm") and config.html_strip):
        text = strip_markup(text)
    return text


def annotated_xml(doc: Document, record: DocumentRecord) -> bytes:
    """Inline XML of every annotation, dropping crossing ones if needed."""
    try:
        return serialize_inline_xml(doc)
    except OverlapNotNestable:
        kept, dropped = nestable_subset(doc.annotation_set(DEFAULT_SET), keep_first=FACET_FIRST)
        for a in dropped:
            record.warnings.append(f"{a.type_name}[{a.start},{a.end}) crosses another annotation; "
                                   "left out of the XML output")
        return serialize_annotations(doc, kept)


def cmd_analyze(corpus_dir, config: Config, out_dir=None) -> RunManifest:
    corpus_dir = Path(corpus_dir)
    out_dir = Path(out_dir) if out_dir else config.output_dir / "annotated"
    files = sorted(p for p in corpus_dir.iterdir()
                   if p.is_file() and p.suffix.lower() in CORPUS_SUFFIXES) if corpus_dir.is_dir() else []
    if not files:
        raise EmptyCorpus(f"no .txt/.html/.xml documents in {corpus_dir}")
    gaz = load_gazetteer(config.gazetteer_index)
    phases = [p for rf in config.rule_files for p in load_rules(rf)]
    manifest = _new_manifest("analyze", config)
    names = _output_names(files, ".xml")
    for path in files:
        rec = DocumentRecord(path.name)
        manifest.documents.append(rec)
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                doc = Document(path.name, load_text(path, config))
                run_pipeline(doc, gaz, phases)
            rec.warnings += [str(w.message) for w in caught]
            rec.counts = dict(sorted(Counter(a.type_name for a in doc.annotation_set()).items()))
            target = out_dir / names[path]
            write_atomic(target, annotated_xml(doc, rec))
            rec.outputs.append(target.name)
        except (OSError, UnicodeDecodeError, AsapError) as exc:
            rec.status = "error"
            rec.error = f"{type(exc).__name__}: {exc}"
    write_atomic(out_dir / MANIFEST, manifest.to_json().encode("utf-8"))
    return manifest


def cmd_structure(annotated_dir, config: Config, out_dir=None) -> RunManifest:
    annotated_dir = Path(annotated_dir)
    out_dir = Path(out_dir) if out_dir else config.output_dir / "structured"
    files = sorted(p for p in annotated_dir.glob("*.xml") if p.is_file()) if annotated_dir.is_dir() else []
    if not files:
        raise EmptyCorpus(f"no annotated .xml files in {annotated_dir}")
    mapping = load_facet_mapping(config.facet_mapping)
    manifest = _new_manifest("structure", config)
    names = _output_names(files, "")
    for path in files:
        rec = DocumentRecord(path.name)
        manifest.documents.append(rec)
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                doc = parse_inline_xml(path.read_bytes(), source_name=path.name)
                pattern, report = structure_document(doc, mapping, config.strip_types)
            rec.warnings += [str(w.message) for w in caught]
            rec.valid = report.valid
            rec.validation = report.lines()
            stem = names[path]
            write_atomic(out_dir / f"{stem}.xml", emit_pattern_xml(pattern))
            write_atomic(out_dir / f"{stem}.validation.txt", "\n".join(report.lines()).encode("utf-8")
                         + (b"\n" if report.lines() else b""))
            rec.outputs += [f"{stem}.xml", f"{stem}.validation.txt"]
        except (OSError, AsapError) as exc:
            rec.status = "error"
            rec.error = f"{type(exc).__name__}: {exc}"
    write_atomic(out_dir / MANIFEST, manifest.to_json().encode("utf-8"))
    return manifest


def cmd_diff(key_path, response_path, types, beta=1.0, fmt="text", compare_features=None,
             stream=None) -> int:
    """Print a per-type comparison; 0 iff every type has strict F-measure 1.0."""
    stream = stream or sys.stdout
    key_doc = parse_inline_xml(Path(key_path).read_bytes(), source_name=str(key_path))
    resp_doc = parse_inline_xml(Path(response_path).read_bytes(), source_name=str(response_path))
    reports = diff_report(key_doc, resp_doc, types, beta, compare_features)
    for r in reports:
        if fmt == "jsonl":
            stream.write("\n".join(render_records(r)) + "\n")
        else:
            stream.write(render_text(r) + "\n")
    ok = all(r.metrics.get(STRICT, "f_measure") == 1.0 for r in reports)
    return 0 if ok else 1


def _split_list(value: str) -> List[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="asap", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="annotate a corpus of pattern descriptions")
    a.add_argument("corpus_dir")
    a.add_argument("--config", help="config file (default: bundled or $ASAP_RESOURCES/asap.conf)")
    a.add_argument("--out", help="output directory (default: <output_dir>/annotated)")

    s = sub.add_parser("structure", help="turn annotated documents into unified patterns")
    s.add_argument("annotated_dir")
    s.add_argument("--config")
    s.add_argument("--out", help="output directory (default: <output_dir>/structured)")

    d = sub.add_parser("diff", help="compare key and response annotations")
    d.add_argument("--key", required=True)
    d.add_argument("--response", required=True)
    d.add_argument("--types", required=True, type=_split_list, help="comma-separated type names")
    d.add_argument("--beta", type=float, default=1.0)
    d.add_argument("--features", type=_split_list, default=None,
                   help="feature names that must also agree for a correct match")
    d.add_argument("--format", choices=("text", "jsonl"), default="text")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "diff":
            return cmd_diff(args.key, args.response, args.types, args.beta, args.format, args.features)
        config = load_config(args.config)
        if args.command == "analyze":
            manifest = cmd_analyze(args.corpus_dir, config, args.out)
        else:
            manifest = cmd_structure(args.annotated_dir, config, args.out)
    except (AsapError, OSError, ValueError) as exc:
        print(f"asap: error: {exc}", file=sys.stderr)
        return 2
    for rec in manifest.failed:
        print(f"asap: {rec.input}: {rec.error}", file=sys.stderr)
    done = len(manifest.documents) - len(manifest.failed)
    print(f"{args.command}: {done}/{len(manifest.documents)} documents processed")
    return 1 if manifest.failed else 0


if __name__ == "__main__":
    sys.exit(main())
