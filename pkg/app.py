"""
Main Application Entry Point
Discrete homotopy toolkit for metric graphs: environment and logging bootstrap, then the CLI
"""

import os
import sys
import io
import logging
from dotenv import load_dotenv

# Fix Unicode encoding issues on Windows
if sys.platform == "win32":
    sys.stdout = io.TextIOWrapper(sys.stdout.buffer, encoding='utf-8')
    sys.stderr = io.TextIOWrapper(sys.stderr.buffer, encoding='utf-8')

# Load environment variables
load_dotenv()

LOG_FILE = os.getenv('LOG_FILE', 'logs/app.log')


def configure_logging() -> None:
    """File log plus stderr, so stdout stays free for result tables"""
    log_dir = os.path.dirname(LOG_FILE)
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)

    logging.basicConfig(
        level=os.getenv('LOG_LEVEL', 'INFO'),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(LOG_FILE, encoding='utf-8'),
            logging.StreamHandler(sys.stderr)
        ]
    )


if __name__ == '__main__':
    configure_logging()

    # Import after logging is configured
    from cli.main import main

    sys.exit(main(sys.argv[1:]))
