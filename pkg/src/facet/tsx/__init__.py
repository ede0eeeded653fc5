"""TSX/JSX parsing and component discovery."""
from .parser import Parser, TsxSyntaxError, parse_module
from .component import (NoComponentFound, ParsedComponent, UnsupportedTypeConstruct,
                        byte_converter, discover_schema, parse_source,
                        resolve_aliases)

__all__ = [
    "Parser", "TsxSyntaxError", "parse_module",
    "NoComponentFound", "ParsedComponent", "UnsupportedTypeConstruct",
    "parse_source", "discover_schema", "resolve_aliases", "byte_converter",
]
