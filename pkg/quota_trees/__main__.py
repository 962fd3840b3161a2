import sys

from quota_trees.cli import run


def main() -> None:
    """Main function."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
