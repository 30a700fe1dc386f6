from gradedkit.cli.app import app
from gradedkit.core.paths import ensure_dirs


def main():
    ensure_dirs()
    app()


if __name__ == "__main__":
    main()
