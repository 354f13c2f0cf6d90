"""Entry point for the cone-type service and its commands.

``python run.py <command>`` runs a command (``python run.py --help`` lists them);
``python run.py run`` serves the JSON API.
"""
from conetypes import create_app
from conetypes.cli import main

app = create_app()

if __name__ == "__main__":
    main(create_app=lambda: app)
