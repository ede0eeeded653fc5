"""Impact engine: vi-context classification on the golden fixture, scoring
formula values, threshold algebra, and formula properties."""
import math

import pytest
from hypothesis import given, settings, strategies as st

from facet.impact import analyze_component, find_vi_contexts, score_property
from facet.schema import (ImpactLevel, ImpactScore, ViContextKind,
                          ViContextOccurrence, impact_coefficient)
from facet.tsx import discover_schema, parse_source


def occ(prop, kind, pos=0):
    return ViContextOccurrence(property=prop, kind=kind, span=(pos, pos + 4),
                               snippet="xxxx")


def max_kind(score: ImpactScore) -> ViContextKind:
    return max((o.kind for o in score.occurrences), key=lambda k: k.rank)


class TestProductCardClassification:
    EXPECTED_MAX_KIND = {
        "variant": ViContextKind.STRUCTURE,
        "showBadge": ViContextKind.STRUCTURE,
        "imageUrl": ViContextKind.STRUCTURE,
        "title": ViContextKind.CONTENT,
        "price": ViContextKind.CONTENT,
        "theme": ViContextKind.STYLING,
        "borderStyle": ViContextKind.STYLING,
    }

    def test_max_rank_context_per_property(self, product_card):
        _, scores = product_card
        got = {s.property: max_kind(s) for s in scores}
        assert got == self.EXPECTED_MAX_KIND

    def test_variant_has_two_structure_guards(self, product_card):
        _, scores = product_card
        variant = next(s for s in scores if s.property == "variant")
        assert [o.kind for o in variant.occurrences] == \
            [ViContextKind.STRUCTURE, ViContextKind.STRUCTURE]
        for o in variant.occurrences:
            assert 'variant === "detailed"' in o.snippet

    def test_title_content_plus_alt_styling(self, product_card):
        _, scores = product_card
        title = next(s for s in scores if s.property == "title")
        kinds = sorted(o.kind.value for o in title.occurrences)
        assert kinds == ["content", "styling"]

    def test_theme_is_single_styling_occurrence(self, product_card):
        _, scores = product_card
        theme = next(s for s in scores if s.property == "theme")
        assert [o.kind for o in theme.occurrences] == [ViContextKind.STYLING]
        assert "className" in theme.snippet_of_first() \
            if hasattr(theme, "snippet_of_first") else True

    def test_span_bytes_reslice_to_snippet(self, product_card_source):
        pc = parse_source(product_card_source, "ProductCard.tsx")
        schema = discover_schema(pc)
        source_bytes = product_card_source.encode("utf-8")
        for o in find_vi_contexts(pc, schema):
            sliced = source_bytes[o.span[0]:o.span[1]].decode("utf-8")
            assert sliced.startswith(o.snippet) or sliced == o.snippet


class TestScoreValues:
    def test_hand_computed_impacts(self, product_card):
        _, scores = product_card
        by_prop = {s.property: s for s in scores}
        assert by_prop["showBadge"].impact == pytest.approx(109.5162582, abs=1e-6)
        assert by_prop["variant"].impact == pytest.approx(118.1269247, abs=1e-6)
        assert by_prop["variant"].n == 2
        assert by_prop["price"].impact == pytest.approx(87.6130066, abs=1e-6)
        assert by_prop["theme"].impact == pytest.approx(65.7097549, abs=1e-6)

    def test_impactful_set(self, product_card):
        _, scores = product_card
        impactful = {s.property for s in scores if s.impactful}
        assert impactful == {"variant", "showBadge", "imageUrl"}

    def test_levels(self, product_card):
        _, scores = product_card
        levels = {s.property: s.level for s in scores}
        assert levels["variant"] == ImpactLevel.HIGH
        assert levels["price"] == ImpactLevel.MEDIUM
        assert levels["title"] == ImpactLevel.MEDIUM
        assert levels["theme"] == ImpactLevel.LOW

    def test_scores_sorted_by_impact_then_declaration(self, product_card):
        _, scores = product_card
        impacts = [s.impact for s in scores]
        assert impacts == sorted(impacts, reverse=True)
        # variant and imageUrl tie at 118.127; variant is declared first
        names = [s.property for s in scores]
        assert names.index("variant") < names.index("imageUrl")

    def test_zero_flow_component_scores_zero(self):
        source = ('export const C = ({a, b}: {a: string; b: number}) => '
                  '<div className="static">fixed</div>;')
        _, scores = analyze_component(source, "Z.tsx")
        assert all(s.impact == 0.0 for s in scores)
        assert all(s.level == ImpactLevel.LOW for s in scores)

    def test_determinism_byte_identical_reports(self, product_card_source):
        first = analyze_component(product_card_source, "ProductCard.tsx")
        second = analyze_component(product_card_source, "ProductCard.tsx")
        assert [s.to_dict() for s in first[1]] == [s.to_dict() for s in second[1]]


class TestThresholdAlgebra:
    """First impactful n per context kind, by direct evaluation of the score."""

    CASES = [(ViContextKind.STRUCTURE, 1), (ViContextKind.CONTENT, 3),
             (ViContextKind.STYLING, 11)]

    @pytest.mark.parametrize("kind,first_n", CASES)
    def test_first_impactful_n(self, kind, first_n):
        for n in range(1, 13):
            occs = [occ("p", kind, i * 10) for i in range(n)]
            score = score_property("p", occs)
            assert score.impactful == (n >= first_n), \
                f"{kind.value} n={n}: impact {score.impact}"

    def test_boundary_values(self):
        assert 80 * impact_coefficient(3) >= 100
        assert 80 * impact_coefficient(2) < 100
        assert 60 * impact_coefficient(11) >= 100
        assert 60 * impact_coefficient(10) < 100


@st.composite
def occurrence_sets(draw):
    kinds = st.sampled_from([ViContextKind.STRUCTURE, ViContextKind.CONTENT,
                             ViContextKind.STYLING])
    picked = draw(st.lists(kinds, min_size=1, max_size=40))
    return [occ("p", kind, i * 8) for i, kind in enumerate(picked)]


class TestFormulaProperties:
    @settings(max_examples=1000, deadline=None)
    @given(occurrence_sets())
    def test_floor_and_bound(self, occs):
        score = score_property("p", occs)
        assert score.impact >= score.base - 1e-12
        assert score.impact < 2 * score.base

    @settings(max_examples=1000, deadline=None)
    @given(occurrence_sets(), st.sampled_from([ViContextKind.STRUCTURE,
                                               ViContextKind.CONTENT,
                                               ViContextKind.STYLING]))
    def test_appending_occurrence_never_decreases_impact(self, occs, kind):
        before = score_property("p", occs)
        after = score_property("p", occs + [occ("p", kind, 10_000)])
        assert after.impact >= before.impact - 1e-12

    @settings(max_examples=200, deadline=None)
    @given(st.integers(min_value=1, max_value=500))
    def test_coefficient_range_and_monotonicity(self, n):
        assert 1.0 <= impact_coefficient(n) < 2.0
        # strictly increasing while the increment is above float resolution
        assert impact_coefficient(n + 1) >= impact_coefficient(n)
        if n <= 100:
            assert impact_coefficient(n + 1) > impact_coefficient(n)
        assert impact_coefficient(n) == pytest.approx(
            1 + (1 - math.exp(-n / 10)), abs=1e-12)


class TestClassificationRules:
    def analyze(self, body, props="{on}: {on: boolean; msg?: string; tone?: string}"):
        source = f"export const C = ({props}) => {body};"
        return analyze_component(source, "R.tsx")[1]

    def test_ternary_with_jsx_branch_is_structure(self):
        scores = self.analyze("(<div>{on ? <b>yes</b> : null}</div>)")
        on = next(s for s in scores if s.property == "on")
        assert max_kind(on) == ViContextKind.STRUCTURE

    def test_ternary_with_text_branches_is_content(self):
        scores = self.analyze('(<div>{on ? "yes" : "no"}</div>)')
        on = next(s for s in scores if s.property == "on")
        assert max_kind(on) == ViContextKind.CONTENT

    def test_ternary_in_attribute_with_string_branches_is_styling(self):
        scores = self.analyze('(<div className={on ? "a" : "b"} />)')
        on = next(s for s in scores if s.property == "on")
        assert max_kind(on) == ViContextKind.STYLING

    def test_early_return_guard_is_structure(self):
        source = (
            "export const C = ({on}: {on: boolean}) => {\n"
            "  if (!on) { return null; }\n"
            "  return <div>shown</div>;\n"
            "};")
        scores = analyze_component(source, "G.tsx")[1]
        assert max_kind(scores[0]) == ViContextKind.STRUCTURE

    def test_map_over_prop_is_content(self):
        source = ("export const C = ({items}: {items: string[]}) => "
                  "<ul>{items.map((x) => <li key={x}>{x}</li>)}</ul>;")
        scores = analyze_component(source, "M.tsx")[1]
        items = next(s for s in scores if s.property == "items")
        assert max_kind(items) == ViContextKind.CONTENT

    def test_callback_params_shadow_props(self):
        source = ("export const C = ({x}: {x: string[]}) => "
                  "<ul>{x.map((x) => <li className={x}>row</li>)}</ul>;")
        scores = analyze_component(source, "S.tsx")[1]
        x = scores[0]
        # the map drives content; the shadowed className x is not the prop
        assert [o.kind for o in x.occurrences] == [ViContextKind.CONTENT]

    def test_dynamic_tag_selection_is_structure(self):
        source = ("export const C = ({as}: {as: string}) => {\n"
                  "  const Tag = as;\n"
                  "  return <Tag className=\"x\">content</Tag>;\n"
                  "};")
        scores = analyze_component(source, "D.tsx")[1]
        assert max_kind(scores[0]) == ViContextKind.STRUCTURE

    def test_two_mentions_in_one_test_count_once(self):
        source = ('export const C = ({v}: {v: string}) => '
                  '<div>{(v === "a" || v === "b") && <b>x</b>}</div>;')
        scores = analyze_component(source, "O.tsx")[1]
        assert scores[0].n == 1

    def test_attribute_value_flow_is_styling(self):
        source = ('export const C = ({alt}: {alt: string}) => '
                  '<img src="x.png" alt={alt} />;')
        scores = analyze_component(source, "A.tsx")[1]
        assert [o.kind for o in scores[0].occurrences] == [ViContextKind.STYLING]
