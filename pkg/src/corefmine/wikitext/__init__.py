from .dump import (DumpReader, RawPage, normalize_title, open_dump, parse_dump,
                   redirect_directive)
from .redirects import resolve_redirects
from .textparse import (InternalLink, Paragraph, ParsedPage,
                        extract_infobox_type, parse_page)

__all__ = [
    "DumpReader", "RawPage", "normalize_title", "open_dump", "parse_dump",
    "redirect_directive", "resolve_redirects", "InternalLink", "Paragraph",
    "ParsedPage", "extract_infobox_type", "parse_page",
]
