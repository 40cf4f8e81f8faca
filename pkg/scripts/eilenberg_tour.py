#!/usr/bin/env python3
"""Walk one language through every construction, printing the small reports.

Usage: python scripts/eilenberg_tour.py [REGEX] [ALPHABET]
"""

import json
import sys

from langdual import (
    DualityTag,
    compile_text,
    language_to_regex,
    left_derivative,
    piece_to_monoid,
    residuals,
    right_derivative,
    roundtrip_check,
    rqc_closure,
    two_sided_residuals,
)
from langdual.correspondence import correspondence_report
from langdual.duality import c_tag

PAIRS = [DualityTag.BA_SET, DualityTag.DL01_POS, DualityTag.JSL_SELF, DualityTag.Z2_SELF]


def main() -> int:
    text = sys.argv[1] if len(sys.argv) > 1 else "(ab)*"
    alphabet = tuple(sys.argv[2]) if len(sys.argv) > 2 else ("a", "b")
    lang = compile_text(text, alphabet)
    print(f"language        {text}  (minimal DFA: {lang.n_states} states)")
    print(f"residuals       {sorted(language_to_regex(r) for r in residuals(lang))}")
    for a in alphabet:
        print(f"derivatives[{a}]  left={language_to_regex(left_derivative(lang, a))!r}"
              f"  right={language_to_regex(right_derivative(lang, a))!r}")
    print(f"two-sided       {len(two_sided_residuals(lang))} residuals")
    for dtag in PAIRS:
        piece = rqc_closure(c_tag(dtag), [lang])
        monoid = piece_to_monoid(dtag, piece)
        roundtrip_check(dtag, piece)
        print(
            f"{dtag.value:<9}  piece: {piece.size:>3} languages   "
            f"monoid: {monoid.size:>3} elements   roundtrip: ok"
        )
    report = correspondence_report(DualityTag.BA_SET, [lang])
    print("\nfull boolean report:")
    print(json.dumps(report, indent=2, sort_keys=True)[:800])
    return 0


if __name__ == "__main__":
    sys.exit(main())
