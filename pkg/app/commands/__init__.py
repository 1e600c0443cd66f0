"""One click command per subcommand, registered in main.py."""
