from graphkt.cli import main

main()
