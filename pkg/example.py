#!/usr/bin/env python3
"""
Example script demonstrating the colouring bijection toolkit.

This script shows how to use the package programmatically without the command line.
"""

import sys

from colouring_bijections import (
    ColouringPipeline,
    Config,
    SearchConfig,
    build_from_spec,
    is_colouring_bijection,
    is_strong_complete_mapping,
    search,
)
from colouring_bijections.graph3 import verify_proper
from colouring_bijections.search_engine import SearchMode, SearchTarget, scm_census
from colouring_bijections.tables import h3_sigma, verify_tables


def example_verification():
    """Example: Check the stored H3 colouring bijection and its chromatic certificate."""

    print("Verification Example")
    print("=" * 60)

    sigma = h3_sigma()
    group = sigma.group
    print(f"  Group: {group.name} (order {group.order})")
    print(f"  Colouring bijection: {is_colouring_bijection(group, sigma)}")
    print(f"  Strong complete mapping: {is_strong_complete_mapping(group, sigma)}")

    certificate = verify_proper(group, sigma, jobs=4)
    print(f"  Vertices checked: {certificate.vertices_checked}")
    print(f"  Chromatic number: {certificate.conclusion}")


def example_search():
    """Example: Count and find colouring bijections."""

    print("\n" + "=" * 60)
    print("Search Example")
    print("=" * 60)

    group = build_from_spec("C3xC3")
    result = search(group, SearchConfig(mode=SearchMode.COUNT, target=SearchTarget.COLOURING_BIJECTION))
    print(f"  {group.name}: {result.count} colouring bijections ({result.nodes_explored} nodes)")

    census = scm_census(group, fix_identity=True)
    print(f"  Identity-fixing SCMs: {census.scm_count}, of which colouring bijection inverses: {census.cb_count}")

    group = build_from_spec("C3")
    result = search(group, SearchConfig())
    print(f"  {group.name}: found {len(result.found)}, exhausted {result.exhausted}")


def example_colouring():
    """Example: Recursively colour groups with progress updates."""

    print("\n" + "=" * 60)
    print("Recursive Colouring Example")
    print("=" * 60)

    pipeline = ColouringPipeline(Config())
    pipeline.add_status_callback(lambda status: print(f"    [{status.progress:.0%}] {status.message}"))

    for spec in ["H3xC3", "C5xC3xC3", "C27"]:
        result = pipeline.colour(build_from_spec(spec))
        print(f"  {spec}: {result.outcome.value} in {result.execution_time:.2f} seconds")
        for step in result.trace:
            print(f"    {'  ' * step.depth}{step.group}: {step.action} {step.detail}")


def main():
    """Main example function."""

    print("Colouring Bijections Examples")

    try:
        report = verify_tables()
        print(f"Embedded tables verified: {report.passed}\n")

        example_verification()
        example_search()
        example_colouring()

        print("\n" + "=" * 60)
        print("Examples completed!")
        print("\nNext steps:")
        print("1. Run the command line: python -m colouring_bijections --help")
        print("2. Export a search result: python -m colouring_bijections search --group H3 --fix-identity --out h3.perm")

    except ImportError as e:
        print(f"\nImport error: {e}")
        print("Please install dependencies: pip install -r requirements.txt")
        sys.exit(1)


if __name__ == "__main__":
    main()
