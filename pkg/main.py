"""
EdgeFilterLab - Main Entry Point
Edge-variant graph filter design and distributed simulation
"""
import sys
import traceback

from src.cli import main as run_cli


def exception_hook(exc_type, exc_value, exc_traceback):
    """Global exception handler to catch uncaught exceptions"""
    error_msg = ''.join(traceback.format_exception(exc_type, exc_value, exc_traceback))

    print("=" * 80, file=sys.stderr)
    print("UNHANDLED EXCEPTION:", file=sys.stderr)
    print("=" * 80, file=sys.stderr)
    print(error_msg, file=sys.stderr)
    print("=" * 80, file=sys.stderr)

    # Call the default handler
    sys.__excepthook__(exc_type, exc_value, exc_traceback)


def main():
    """Main application entry point"""
    sys.excepthook = exception_hook
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
