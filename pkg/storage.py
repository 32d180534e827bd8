import os
import json
from typing import Any, Dict, List

SECTION_ORDER = ('tool', 'config', 'cyclotomic', 'ring', 'obstruction', 'census', 'center', 'subcat',
                 'fixtures', 'verdict')
TEXT_FILENAME = "certificate.txt"
MARKDOWN_FILENAME = "certificate.md"


def format_value(value: Any) -> str:
    """Stable one-line rendering: lowercase booleans, compact JSON for containers."""
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if value is None:
        return 'none'
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value, separators=(',', ':'), sort_keys=True, ensure_ascii=False)
    return str(value)


class CertificateStorage:
    """Writes the certificate as key = value text and as markdown."""

    def __init__(self, output_dir: str):
        self.output_dir = output_dir
        os.makedirs(self.output_dir, exist_ok=True)
        print(f"[INFO] CertificateStorage initialized. Output directory: {self.output_dir}")

    # --- Rendering ---

    def _sections(self, report: Dict[str, Any]):
        sections = report.get('sections', {})
        for name in SECTION_ORDER:
            if name in sections:
                yield name, sections[name]

    def render_text(self, report: Dict[str, Any]) -> str:
        lines: List[str] = []
        for name, section in self._sections(report):
            for key in sorted(section):
                lines.append(f"{name}.{key} = {format_value(section[key])}")
        for name, table in report.get('tables', {}).items():
            lines.append("")
            lines.append(f"[table {name}]")
            lines.append("\t".join(table['columns']))
            for row in table['rows']:
                lines.append("\t".join(str(v) for v in row))
        return "\n".join(lines) + "\n"

    def render_markdown(self, report: Dict[str, Any]) -> str:
        verdict = report.get('sections', {}).get('verdict', {})
        lines = ["# Certificate: K(R) has no pseudounitary categorification", ""]
        lines.append(f"**Verdict:** {format_value(verdict.get('status'))}")
        for name, section in self._sections(report):
            lines.append("")
            lines.append(f"## {name}")
            lines.append("")
            lines.append("| key | value |")
            lines.append("| --- | --- |")
            for key in sorted(section):
                cell = format_value(section[key]).replace('|', '\\|')
                lines.append(f"| `{key}` | {cell} |")
        for name, table in report.get('tables', {}).items():
            lines.append("")
            lines.append(f"## Table: {table.get('title', name)}")
            lines.append("")
            lines.append("| " + " | ".join(table['columns']) + " |")
            lines.append("|" + " --- |" * len(table['columns']))
            for row in table['rows']:
                lines.append("| " + " | ".join(str(v) for v in row) + " |")
        return "\n".join(lines) + "\n"

    # --- Saving ---

    def save_report(self, report: Dict[str, Any], fmt: str = 'both') -> List[str]:
        """Writes certificate.txt and/or certificate.md; returns the paths written."""
        outputs = []
        if fmt in ('text', 'both'):
            outputs.append((TEXT_FILENAME, self.render_text(report)))
        if fmt in ('markdown', 'both'):
            outputs.append((MARKDOWN_FILENAME, self.render_markdown(report)))
        if not outputs:
            raise ValueError(f"Unknown report format '{fmt}'")

        written = []
        for filename, text in outputs:
            path = os.path.join(self.output_dir, filename)
            print(f"[INFO] Saving certificate to {path}...")
            with open(path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(text)
            written.append(path)
        print(f"[INFO] Successfully saved {len(written)} certificate file(s).")
        return written
