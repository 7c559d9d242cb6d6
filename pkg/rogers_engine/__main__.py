"""Allow ``python -m rogers_engine`` to run the command-line front end."""

from rogers_engine.apps.cli import main

raise SystemExit(main())
