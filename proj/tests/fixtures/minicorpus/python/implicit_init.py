class Account:
    def __init__(self, owner):
        self.owner = owner
        self.entries = []
        self.record("open")

    def record(self, what):
        self.entries.append(what)

    def deposit(self, amount):
        self.record("deposit %d" % amount)


acct = Account("ada")
acct.deposit(5)
print(acct.entries)
