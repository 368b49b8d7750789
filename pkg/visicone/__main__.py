from visicone.cli import main

main()
