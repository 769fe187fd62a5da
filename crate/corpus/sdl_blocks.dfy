class Account {
  var balance: int

  constructor(initial: int)
  {
    balance := initial;
  }

  method Deposit(amount: int)
    modifies this
  {
    if amount > 0 {
      balance := balance + amount;
    } else {
      print "ignored\n";
    }
  }

  method Withdraw(amount: int) returns (ok: bool)
    modifies this
  {
    ok := false;
    if amount <= balance {
      balance := balance - amount;
      ok := true;
    } else if amount < 0 {
      print "negative\n";
    }
  }
}
